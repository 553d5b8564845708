//! JSON game files and weight files.
//!
//! ```text
//! {"version": 1, "n": 3, "default": 0, "worths": {"1": "1/2", "1,3": 2.5}}
//! ```
//!
//! Keys are comma-separated 1-based players. Worths may be JSON numbers or
//! strings holding decimal or `p/q` literals. Emission writes every nonempty
//! coalition, ordered by size and then lexicographically, with worths as strings.

use std::collections::HashMap;
use std::fmt;

use serde::de::{self, Deserializer, MapAccess, SeqAccess, Visitor};
use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::game::{validate_player_count, Coalition, Game};
use crate::scalar::Scalar;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGameFile {
    version: Option<u64>,
    n: usize,
    default: Option<Literal>,
    worths: Entries,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeightFile {
    weights: Vec<Literal>,
}

/// A worth literal, kept as text so that exact mode parses it exactly.
struct Literal(String);

impl<'de> Deserialize<'de> for Literal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::Number(x) => Ok(Literal(x.to_string())),
            Value::String(s) => Ok(Literal(s)),
            other => Err(de::Error::custom(format!("expected a number or numeric string, found {other}"))),
        }
    }
}

/// Map entries in file order, duplicates included.
struct Entries(Vec<(String, Literal)>);

impl<'de> Deserialize<'de> for Entries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct EntriesVisitor;
        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = Entries;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object mapping coalition keys to worths")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Entries, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, Literal>()? {
                    out.push((k, v));
                }
                Ok(Entries(out))
            }
            fn visit_seq<A: SeqAccess<'de>>(self, _: A) -> std::result::Result<Entries, A::Error> {
                Err(de::Error::custom("worths must be an object, not an array"))
            }
        }
        d.deserialize_map(EntriesVisitor)
    }
}

fn syntax_error(e: serde_json::Error) -> Error {
    Error::Parse { line: e.line(), column: e.column(), message: strip_position(&e.to_string()) }
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(k) => msg[..k].to_string(),
        None => msg.to_string(),
    }
}

/// 1-based line and column of the first occurrence of `"key"` in `text`.
fn key_position(text: &str, key: &str) -> (usize, usize) {
    let needle = format!("\"{key}\"");
    let Some(offset) = text.find(&needle) else { return (0, 0) };
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |k| k + 1) + 1;
    (line, column)
}

fn parse_key(key: &str, n: usize) -> std::result::Result<Coalition, String> {
    if key.trim().is_empty() {
        return Ok(Coalition::EMPTY);
    }
    let mut s = Coalition::EMPTY;
    for part in key.split(',') {
        let p: usize = part.trim().parse().map_err(|_| format!("bad player {part:?} in key {key:?}"))?;
        if p == 0 || p > n {
            return Err(format!("player {p} in key {key:?} is outside 1..={n}"));
        }
        if s.contains(p - 1) {
            return Err(format!("player {p} repeated in key {key:?}"));
        }
        s = s.with(p - 1);
    }
    Ok(s)
}

/// Parses a game file. Missing coalitions take the declared default, if any.
pub fn parse_game<T: Scalar>(text: &str) -> Result<Game<T>> {
    let raw: RawGameFile = serde_json::from_str(text).map_err(syntax_error)?;
    if let Some(version) = raw.version {
        if version != FORMAT_VERSION {
            return Err(Error::InvalidGameFile(format!("unsupported version {version}")));
        }
    }
    validate_player_count(raw.n)?;
    let n = raw.n;
    let at_key = |key: &str, message: String| {
        let (line, column) = key_position(text, key);
        Error::Parse { line, column, message }
    };
    let default = match &raw.default {
        Some(Literal(lit)) => Some(T::parse_literal(lit).map_err(|m| at_key("default", m))?),
        None => None,
    };

    let mut seen: HashMap<Coalition, &str> = HashMap::new();
    let mut worth: Vec<Option<T>> = vec![None; 1 << n];
    for (key, Literal(lit)) in &raw.worths.0 {
        let s = parse_key(key, n).map_err(|m| at_key(key, m))?;
        if let Some(first) = seen.insert(s, key) {
            return Err(Error::DuplicateKey(format!("{key:?} repeats {first:?}")));
        }
        let w = T::parse_literal(lit).map_err(|m| at_key(key, format!("worth of {key:?}: {m}")))?;
        if s.is_empty() {
            if !w.is_zero() {
                return Err(Error::NonZeroEmptySet);
            }
            continue;
        }
        worth[s.mask()] = Some(w);
    }
    let mut table = Vec::with_capacity(1 << n);
    for s in Coalition::all(n) {
        let w = match (worth[s.mask()].take(), &default) {
            (Some(w), _) => w,
            (None, _) if s.is_empty() => T::zero(),
            (None, Some(d)) => d.clone(),
            (None, None) => return Err(Error::MissingCoalition(s.key())),
        };
        table.push(w);
    }
    Game::new(n, table)
}

/// Nonempty coalitions ordered by size, then by player list.
pub fn canonical_order(n: usize) -> Vec<Coalition> {
    let mut all: Vec<Coalition> = Coalition::all(n).skip(1).collect();
    all.sort_by_key(|s| (s.size(), s.players().collect::<Vec<_>>()));
    all
}

/// Canonical game file text. `parse_game(&emit_game(v)) == v`.
pub fn emit_game<T: Scalar>(v: &Game<T>) -> String {
    let mut out = format!("{{\n  \"version\": {FORMAT_VERSION},\n  \"n\": {},\n  \"worths\": {{\n", v.n());
    let order = canonical_order(v.n());
    for (k, s) in order.iter().enumerate() {
        let sep = if k + 1 == order.len() { "" } else { "," };
        out.push_str(&format!("    \"{}\": \"{}\"{sep}\n", s.key(), v.worth(*s)));
    }
    out.push_str("  }\n}\n");
    out
}

/// Game as a JSON value in file format, for embedding in reports.
pub fn game_to_json<T: Scalar>(v: &Game<T>) -> Value {
    let worths: serde_json::Map<String, Value> =
        canonical_order(v.n()).into_iter().map(|s| (s.key(), Value::String(v.worth(s).to_string()))).collect();
    serde_json::json!({ "version": FORMAT_VERSION, "n": v.n(), "worths": worths })
}

/// Parses a weight file `{"weights": [...]}`; entry `k` is the weight of size `k + 1`.
pub fn parse_weights<T: Scalar>(text: &str) -> Result<Vec<T>> {
    let raw: RawWeightFile = serde_json::from_str(text).map_err(syntax_error)?;
    raw.weights
        .iter()
        .enumerate()
        .map(|(k, Literal(lit))| {
            T::parse_literal(lit).map_err(|m| Error::InvalidWeights(format!("entry {}: {m}", k + 1)))
        })
        .collect()
}

pub fn emit_weights<T: Scalar>(w: &[T]) -> String {
    let items: Vec<String> = w.iter().map(|x| format!("\"{x}\"")).collect();
    format!("{{\"weights\": [{}]}}\n", items.join(", "))
}
