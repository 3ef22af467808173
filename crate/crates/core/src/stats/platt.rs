use serde::{Deserialize, Serialize};

/// Sigmoid `P(female | f) = 1 / (1 + exp(A f + B))` over SVM decision
/// values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Platt {
    pub a: f64,
    pub b: f64,
}

impl Platt {
    pub fn probability(&self, decision: f64) -> f64 {
        let f = decision * self.a + self.b;
        if f >= 0.0 {
            (-f).exp() / (1.0 + (-f).exp())
        } else {
            1.0 / (1.0 + f.exp())
        }
    }
}

fn objective(dec: &[f64], t: &[f64], a: f64, b: f64) -> f64 {
    dec.iter()
        .zip(t)
        .map(|(&d, &ti)| {
            let f = d * a + b;
            if f >= 0.0 {
                ti * f + (-f).exp().ln_1p()
            } else {
                (ti - 1.0) * f + f.exp().ln_1p()
            }
        })
        .sum()
}

/// Newton fit with backtracking line search and regularized targets
/// (Lin, Lin and Weng's variant of Platt's method).
pub fn fit_platt(dec: &[f64], labels: &[bool]) -> Platt {
    const MAX_ITER: usize = 100;
    const MIN_STEP: f64 = 1e-10;
    const SIGMA: f64 = 1e-12;
    const EPS: f64 = 1e-5;

    let prior1 = labels.iter().filter(|&&l| l).count() as f64;
    let prior0 = labels.len() as f64 - prior1;
    let hi = (prior1 + 1.0) / (prior1 + 2.0);
    let lo = 1.0 / (prior0 + 2.0);
    let t: Vec<f64> = labels.iter().map(|&l| if l { hi } else { lo }).collect();

    let mut a = 0.0;
    let mut b = ((prior0 + 1.0) / (prior1 + 1.0)).ln();
    let mut fval = objective(dec, &t, a, b);
    for _ in 0..MAX_ITER {
        let (mut h11, mut h22, mut h21, mut g1, mut g2) = (SIGMA, SIGMA, 0.0, 0.0, 0.0);
        for (&d, &ti) in dec.iter().zip(&t) {
            let f = d * a + b;
            let (p, q) = if f >= 0.0 {
                let e = (-f).exp();
                (e / (1.0 + e), 1.0 / (1.0 + e))
            } else {
                let e = f.exp();
                (1.0 / (1.0 + e), e / (1.0 + e))
            };
            let d2 = p * q;
            h11 += d * d * d2;
            h22 += d2;
            h21 += d * d2;
            let d1 = ti - p;
            g1 += d * d1;
            g2 += d1;
        }
        if g1.abs() < EPS && g2.abs() < EPS {
            break;
        }
        let det = h11 * h22 - h21 * h21;
        let da = -(h22 * g1 - h21 * g2) / det;
        let db = -(-h21 * g1 + h11 * g2) / det;
        let gd = g1 * da + g2 * db;
        let mut step = 1.0;
        while step >= MIN_STEP {
            let (na, nb) = (a + step * da, b + step * db);
            let nf = objective(dec, &t, na, nb);
            if nf < fval + 1e-4 * step * gd {
                a = na;
                b = nb;
                fval = nf;
                break;
            }
            step /= 2.0;
        }
        if step < MIN_STEP {
            break;
        }
    }
    Platt { a, b }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_decisions_mean_female() {
        let dec: Vec<f64> = (-20..20).map(|i| i as f64 / 10.0).collect();
        let labels: Vec<bool> = dec.iter().enumerate().map(|(i, &d)| if i % 5 == 0 { d < 0.0 } else { d > 0.0 }).collect();
        let p = fit_platt(&dec, &labels);
        assert!(p.a < 0.0);
        assert!(p.probability(2.0) > 0.8);
        assert!(p.probability(-2.0) < 0.2);
        assert!(p.probability(1.0) > p.probability(0.5));
    }

    #[test]
    fn fit_minimizes_the_objective() {
        let dec = [-1.5, -0.7, -0.2, 0.1, 0.3, 0.9, 1.4, -0.1, 0.5, -0.9];
        let labels = [false, false, true, false, true, true, true, false, false, false];
        let p = fit_platt(&dec, &labels);
        let prior1 = 4.0;
        let t: Vec<f64> = labels.iter().map(|&l| if l { (prior1 + 1.0) / (prior1 + 2.0) } else { 1.0 / 8.0 }).collect();
        let best = objective(&dec, &t, p.a, p.b);
        for (da, db) in [(0.01, 0.0), (-0.01, 0.0), (0.0, 0.01), (0.0, -0.01)] {
            assert!(objective(&dec, &t, p.a + da, p.b + db) >= best - 1e-9);
        }
    }

    #[test]
    fn extreme_values_stay_finite() {
        let p = Platt { a: -5.0, b: 0.0 };
        assert_eq!(p.probability(1e6), 1.0);
        assert_eq!(p.probability(-1e6), 0.0);
    }
}
