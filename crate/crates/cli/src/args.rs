use std::collections::BTreeMap;

use equilab::multfun::MultiplicativeFunction;

/// Parses `12`, `1e7`, `2.5e3` or `1_000_000` into an exact integer.
pub fn parse_u64(s: &str) -> Result<u64, String> {
    let t: String = s.trim().chars().filter(|&c| c != '_').collect();
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = t[i + 1..]
                .parse()
                .map_err(|_| format!("bad exponent in '{s}'"))?;
            (&t[..i], e)
        }
        None => (t.as_str(), 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(format!("'{s}' is not a non-negative number"));
    }
    let digits = format!("{int}{frac}");
    let shift = exp - frac.len() as i64;
    let digits = digits.trim_start_matches('0');
    if digits.is_empty() {
        return Ok(0);
    }
    let (body, zeros) = if shift >= 0 {
        (digits.to_string(), shift as usize)
    } else {
        let cut = (-shift) as usize;
        let tail = if cut >= digits.len() {
            digits
        } else {
            &digits[digits.len() - cut..]
        };
        if tail.chars().any(|c| c != '0') {
            return Err(format!("'{s}' is not an integer"));
        }
        if cut >= digits.len() {
            return Ok(0);
        }
        (digits[..digits.len() - cut].to_string(), 0)
    };
    if body.len() + zeros > 20 {
        return Err(format!("'{s}' does not fit in 64 bits"));
    }
    format!("{body}{}", "0".repeat(zeros))
        .parse()
        .map_err(|_| format!("'{s}' does not fit in 64 bits"))
}

/// `lo..hi` or `lo..=hi`, both inclusive.
pub fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("range '{s}' should look like 7..23"))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let (lo, hi) = (parse_u64(lo)?, parse_u64(hi)?);
    if lo > hi {
        return Err(format!("empty range '{s}'"));
    }
    Ok((lo, hi))
}

pub fn parse_list(s: &str) -> Result<Vec<u64>, String> {
    s.split(',').map(parse_u64).collect()
}

/// Classes separated by `;`, coordinates by `,`.
pub fn parse_classes(s: &str) -> Result<Vec<Vec<u64>>, String> {
    s.split(';').map(parse_list).collect()
}

/// Splits on commas outside brackets, so `[0,1],phi` is two tokens.
pub fn split_tokens(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur).trim().to_string());
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur.trim().to_string());
    out.retain(|t| !t.is_empty());
    out
}

pub fn parse_family(s: &str) -> Result<Vec<MultiplicativeFunction>, String> {
    split_tokens(s)
        .iter()
        .map(|t| MultiplicativeFunction::from_token(t).map_err(|e| e.to_string()))
        .collect()
}

/// A JSON map `{"p": a_p, ...}`.
pub fn parse_choices(s: &str) -> Result<BTreeMap<u64, u64>, String> {
    let raw: BTreeMap<String, u64> =
        serde_json::from_str(s).map_err(|e| format!("bad choices '{s}': {e}"))?;
    raw.into_iter()
        .map(|(p, a)| Ok((parse_u64(&p)?, a)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scientific_integers() {
        assert_eq!(parse_u64("1e7"), Ok(10_000_000));
        assert_eq!(parse_u64("2.5e3"), Ok(2500));
        assert_eq!(parse_u64("1_000"), Ok(1000));
        assert_eq!(parse_u64("17"), Ok(17));
        assert_eq!(parse_u64("0e5"), Ok(0));
        assert_eq!(parse_u64("1200e-2"), Ok(12));
        assert!(parse_u64("1.5").is_err());
        assert!(parse_u64("1e-3").is_err());
        assert!(parse_u64("-3").is_err());
        assert!(parse_u64("1e30").is_err());
        assert!(parse_u64("abc").is_err());
    }

    #[test]
    fn ranges_lists_and_tokens() {
        assert_eq!(parse_range("7..23"), Ok((7, 23)));
        assert_eq!(parse_range("7..=23"), Ok((7, 23)));
        assert!(parse_range("23..7").is_err());
        assert_eq!(parse_classes("1,1;2,3"), Ok(vec![vec![1, 1], vec![2, 3]]));
        assert_eq!(
            split_tokens("[0, 1],phi, sigma"),
            vec!["[0, 1]", "phi", "sigma"]
        );
        assert_eq!(parse_family("id,[1,0,1]").unwrap().len(), 2);
        assert!(parse_family("foo").is_err());
        assert_eq!(
            parse_choices(r#"{"2": 0, "3": 1}"#).unwrap(),
            BTreeMap::from([(2, 0), (3, 1)])
        );
    }
}
