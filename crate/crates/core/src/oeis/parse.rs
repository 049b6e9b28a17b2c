use num_bigint::BigInt;
use serde_json::Value;

use crate::error::{Error, Result};

fn malformed(message: impl Into<String>, raw: &str) -> Error {
    Error::MalformedResponse {
        message: message.into(),
        raw: raw.to_owned(),
    }
}

/// Extracts the A-numbers from a search reply.
///
/// The endpoint has answered both with a bare array of entries and with an
/// object carrying a `results` array; `null` in either position means no hits.
pub fn search_ids(raw: &str) -> Result<Vec<String>> {
    let doc: Value = serde_json::from_str(raw).map_err(|e| malformed(format!("not JSON: {e}"), raw))?;
    let results = match &doc {
        Value::Null => return Ok(Vec::new()),
        Value::Array(items) => items,
        Value::Object(obj) => match obj.get("results") {
            Some(Value::Array(items)) => items,
            Some(Value::Null) | None if obj.contains_key("count") || obj.contains_key("greeting") => {
                return Ok(Vec::new())
            }
            _ => return Err(malformed("object reply without a results array", raw)),
        },
        _ => return Err(malformed("unexpected top-level JSON value", raw)),
    };
    results
        .iter()
        .map(|entry| {
            entry
                .get("number")
                .and_then(Value::as_u64)
                .map(|k| format!("A{k:06}"))
                .ok_or_else(|| malformed("result entry without a numeric `number`", raw))
        })
        .collect()
}

/// Parses a b-file: `index value` per line, `#` comments and blank lines skipped.
pub fn bfile(raw: &str) -> Result<Vec<(i64, BigInt)>> {
    let mut out = Vec::new();
    for line in raw.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(i), Some(v)) = (parts.next(), parts.next()) else {
            return Err(malformed(format!("b-file line {line:?}"), raw));
        };
        let i = i.parse::<i64>().map_err(|_| malformed(format!("b-file index {i:?}"), raw))?;
        let v = v.parse::<BigInt>().map_err(|_| malformed(format!("b-file value {v:?}"), raw))?;
        out.push((i, v));
    }
    if out.is_empty() {
        return Err(malformed("b-file has no terms", raw));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_reply_shapes() {
        let arr = r#"[{"number": 290, "data": "0,1,4,9"}, {"number": 1105}]"#;
        assert_eq!(search_ids(arr).unwrap(), ["A000290", "A001105"]);
        let obj = r#"{"greeting": "hi", "count": 1, "results": [{"number": 45}]}"#;
        assert_eq!(search_ids(obj).unwrap(), ["A000045"]);
        assert!(search_ids("null").unwrap().is_empty());
        assert!(search_ids(r#"{"greeting": "hi", "count": 0, "results": null}"#).unwrap().is_empty());
    }

    #[test]
    fn malformed_keeps_payload() {
        for raw in ["<html>busy</html>", r#"[{"name": "x"}]"#, "42", r#"{"oops": 1}"#] {
            match search_ids(raw) {
                Err(Error::MalformedResponse { raw: kept, .. }) => assert_eq!(kept, raw),
                other => panic!("{raw}: {other:?}"),
            }
        }
    }

    #[test]
    fn bfile_lines() {
        let raw = "# Fibonacci\n0 0\n1 1\n\n2 1\n3 2\n100 354224848179261915075\n";
        let b = bfile(raw).unwrap();
        assert_eq!(b.len(), 5);
        assert_eq!(b[4], (100, "354224848179261915075".parse().unwrap()));
        assert!(matches!(bfile("0 0\n1 x\n"), Err(Error::MalformedResponse { .. })));
        assert!(bfile("# nothing\n").is_err());
    }
}
