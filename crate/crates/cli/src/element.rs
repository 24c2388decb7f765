//! Parser for element strings such as `2*x1^2t1 + -1*t2x3 - 1`, placed on `e(nu)`.
//!
//! Indices are 1-based: `x1` is the first dot and `t1` swaps strands 1 and 2.

use pdklr_engine::{Element, Klr};

type Letter = Result<usize, (usize, u32)>;

fn number(chars: &[char], i: &mut usize) -> Option<u64> {
    let start = *i;
    while *i < chars.len() && chars[*i].is_ascii_digit() {
        *i += 1;
    }
    chars[start..*i].iter().collect::<String>().parse().ok()
}

fn word(text: &str, n: usize) -> Result<Vec<Letter>, String> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        i += 1;
        match c {
            '1' if out.is_empty() && i == chars.len() => {}
            'x' | 't' => {
                let k = number(&chars, &mut i).ok_or_else(|| format!("missing index after {c} in {text}"))? as usize;
                let bound = if c == 'x' { n } else { n.saturating_sub(1) };
                if k == 0 || k > bound {
                    return Err(format!("index {c}{k} out of range in {text}"));
                }
                if c == 't' {
                    out.push(Ok(k - 1));
                    continue;
                }
                let mut e = 1;
                if chars.get(i) == Some(&'^') {
                    i += 1;
                    e = number(&chars, &mut i).ok_or_else(|| format!("missing exponent in {text}"))? as u32;
                }
                out.push(Err((k - 1, e)));
            }
            _ => return Err(format!("unexpected {c:?} in {text}")),
        }
    }
    Ok(out)
}

fn term(text: &str) -> Result<(i64, String), String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let t = t.as_str();
    if let Some((c, w)) = t.split_once('*') {
        let c = c.trim().parse().map_err(|_| format!("bad coefficient {c}"))?;
        return Ok((c, w.to_string()));
    }
    let digits = t.chars().take_while(|c| c.is_ascii_digit() || *c == '-').count();
    match (&t[..digits], &t[digits..]) {
        ("", w) => Ok((1, w.to_string())),
        ("-", w) => Ok((-1, w.to_string())),
        (c, "") => Ok((c.parse().map_err(|_| format!("bad coefficient {c}"))?, "1".to_string())),
        (c, w) => Ok((c.parse().map_err(|_| format!("bad coefficient {c}"))?, w.to_string())),
    }
}

/// Splits on `+` and on a binary `-`, which negates the following term.
fn terms(text: &str) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut prev = '+';
    for c in text.chars() {
        if c == '+' {
            out.push(String::new());
        } else if c == '-' && !matches!(prev, '+' | '*') && !out.last().unwrap().trim().is_empty() {
            out.push("-".into());
        } else {
            out.last_mut().unwrap().push(c);
        }
        if !c.is_whitespace() {
            prev = c;
        }
    }
    out.into_iter().filter(|s| !s.trim().is_empty()).collect()
}

pub fn parse(k: &Klr, text: &str, nu: u32) -> Result<Element, String> {
    let mut total = k.zero();
    for t in terms(text) {
        let (c, w) = term(&t)?;
        let letters = word(&w, k.n())?;
        let e = k.word_element(&letters, nu).map_err(|e| e.to_string())?;
        total.add_scaled(&e, c);
    }
    Ok(total)
}
