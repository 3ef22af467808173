//! User records, the JSONL reader and per-user profile statistics.

use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::text::Tokens;
use crate::error::{Error, Result};
use crate::Gender;

/// Raw account counters. Counters that can be recomputed from the messages
/// are optional; when absent the tokenizer's counts are used.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Profile {
    pub age_days: u64,
    pub friends: u64,
    pub followers: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tweet_count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retweet_count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mention_count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hashtag_count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link_count: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserRecord {
    pub user_id: String,
    pub name: String,
    #[serde(default)]
    pub tweets: Vec<String>,
    #[serde(default)]
    pub profile: Profile,
    #[serde(default)]
    pub gender: Option<Gender>,
}

/// Records read from a JSONL file and, in permissive mode, the rejected lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct UserFile {
    pub users: Vec<UserRecord>,
    /// `(line number, reason)`, 1-based.
    pub skipped: Vec<(usize, String)>,
}

fn parse_line(text: &str) -> std::result::Result<UserRecord, String> {
    let u: UserRecord = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if u.user_id.trim().is_empty() {
        return Err("empty user_id".into());
    }
    Ok(u)
}

/// Read one JSON object per line; blank lines are ignored. Strict mode fails
/// on the first invalid line, permissive mode skips and reports it.
pub fn read_users_jsonl<R: BufRead>(reader: R, permissive: bool) -> Result<UserFile> {
    let mut out = UserFile::default();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_line(&line) {
            Ok(u) => out.users.push(u),
            Err(message) if permissive => out.skipped.push((i + 1, message)),
            Err(message) => return Err(Error::Record { line: i + 1, message }),
        }
    }
    Ok(out)
}

pub const PROFILE_STATS: [&str; 7] = [
    "tweets_per_day",
    "mentions_per_day",
    "hashtags_per_day",
    "links_per_day",
    "retweets_per_day",
    "retweet_tweet_ratio",
    "friend_follower_ratio",
];

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// The seven profile statistics in [`PROFILE_STATS`] order. Account age is
/// clamped to at least one day and ratios with a zero denominator are 0.
pub fn profile_stats(u: &UserRecord, tokens: &Tokens) -> [f64; 7] {
    let p = &u.profile;
    let days = p.age_days.max(1);
    let tweets = p.tweet_count.unwrap_or(u.tweets.len() as u64);
    let retweets = p.retweet_count.unwrap_or(tokens.retweets);
    [
        ratio(tweets, days),
        ratio(p.mention_count.unwrap_or(tokens.mentions), days),
        ratio(p.hashtag_count.unwrap_or(tokens.hashtags.len() as u64), days),
        ratio(p.link_count.unwrap_or(tokens.links), days),
        ratio(retweets, days),
        ratio(retweets, tweets),
        ratio(p.friends, p.followers),
    ]
}
