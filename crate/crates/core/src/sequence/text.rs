//! Plain-text sequence format.
//!
//! Whitespace-separated tokens, each an element name or word optionally
//! followed by `*count`. `#` starts a comment running to end of line.
//!
//! ```text
//! # twelve central terms and a pair
//! v*12 x y^2
//! ```

use std::fmt;

use crate::group::GroupTable;

use super::{Sequence, SequenceError};

pub fn parse_sequence<'g>(g: &'g GroupTable, text: &str) -> Result<Sequence<'g>, SequenceError> {
    let mut seq = Sequence::new(g);
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split_whitespace() {
            let (name, count) = match tok.rsplit_once('*') {
                Some((name, c)) => {
                    let n: u32 = c
                        .parse()
                        .map_err(|_| SequenceError::Parse(format!("line {}: bad count in `{tok}`", lineno + 1)))?;
                    (name, n)
                }
                None => (tok, 1),
            };
            let el = g.parse_element(name).map_err(|e| SequenceError::Parse(format!("line {}: {e}", lineno + 1)))?;
            seq.push_n(el, count);
        }
    }
    Ok(seq)
}

/// Canonical text: distinct terms by increasing id, `name*count` when
/// the multiplicity exceeds one.
pub fn format_sequence(seq: &Sequence<'_>) -> String {
    let g = seq.group();
    seq.distinct()
        .map(|(el, m)| if m == 1 { g.name(el).to_string() } else { format!("{}*{m}", g.name(el)) })
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for Sequence<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_sequence(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_cyclic, make_heisenberg};

    #[test]
    fn parses_counts_words_and_comments() {
        let g = make_heisenberg(3).unwrap();
        let s = parse_sequence(&g, "v*12 x # trailing\n  y^2 x^1y^0v^0\n").unwrap();
        assert_eq!(s.len(), 15);
        assert_eq!(s.multiplicity(g.parse_element("v").unwrap()), 12);
        assert_eq!(s.multiplicity(g.parse_element("x").unwrap()), 2);
    }

    #[test]
    fn round_trips() {
        let g = make_cyclic(7).unwrap();
        let s = parse_sequence(&g, "c*3 c^4 1").unwrap();
        let t = parse_sequence(&g, &format_sequence(&s)).unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn rejects_garbage() {
        let g = make_cyclic(5).unwrap();
        assert!(matches!(parse_sequence(&g, "c*x"), Err(SequenceError::Parse(_))));
        assert!(matches!(parse_sequence(&g, "q"), Err(SequenceError::Parse(_))));
    }
}
