//! Text grammar for partitions.
//!
//! ```text
//! partition := [ "P(" k "," l "):" ] block { "|" block }
//! block     := { point }
//! point     := "u" index | "l" index | index
//! ```
//!
//! Indices are 1-based. A bare index denotes a lower point. Whitespace and
//! empty blocks are ignored. Without the shape prefix the shape is inferred
//! from the largest upper and lower indices.

use super::{Partition, Point};
use crate::error::{Error, Result};

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number".into()));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Syntax {
                position: start,
                message: "number too large".into(),
            })
    }

    fn error(&self, message: String) -> Error {
        Error::Syntax {
            position: self.pos,
            message,
        }
    }
}

pub(super) fn parse(text: &str) -> Result<Partition> {
    let mut lx = Lexer {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let mut declared = None;
    if lx.peek() == Some(b'P') {
        lx.pos += 1;
        lx.expect(b'(')?;
        let k = lx.number()?;
        lx.expect(b',')?;
        let l = lx.number()?;
        lx.expect(b')')?;
        lx.expect(b':')?;
        declared = Some((k, l));
    }

    let mut blocks: Vec<Vec<Point>> = vec![Vec::new()];
    while let Some(c) = lx.peek() {
        match c {
            b'|' => {
                lx.pos += 1;
                blocks.push(Vec::new());
            }
            b'u' | b'l' | b'0'..=b'9' => {
                let upper = c == b'u';
                if !c.is_ascii_digit() {
                    lx.pos += 1;
                }
                let at = lx.pos;
                let idx = lx.number()?;
                if idx == 0 {
                    return Err(Error::Syntax {
                        position: at,
                        message: "point indices are 1-based".into(),
                    });
                }
                let pt = if upper {
                    Point::Upper(idx - 1)
                } else {
                    Point::Lower(idx - 1)
                };
                blocks.last_mut().unwrap().push(pt);
            }
            other => return Err(lx.error(format!("unexpected character '{}'", other as char))),
        }
    }
    blocks.retain(|b| !b.is_empty());

    let (k, l) = match declared {
        Some(shape) => shape,
        None => {
            let mut k = 0;
            let mut l = 0;
            for pt in blocks.iter().flatten() {
                match *pt {
                    Point::Upper(i) => k = k.max(i + 1),
                    Point::Lower(j) => l = l.max(j + 1),
                }
            }
            (k, l)
        }
    };
    Partition::from_blocks(k, l, &blocks)
}

pub(super) fn format_with_shape(p: &Partition) -> String {
    if p.legs() == 0 {
        "P(0,0):".to_string()
    } else {
        format!("P({},{}): {}", p.upper(), p.lower(), p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_crossing() {
        let p = parse("u1 l2 | u2 l1").unwrap();
        assert_eq!(p, Partition::crossing());
        assert_eq!(p.shape(), (2, 2));
    }

    #[test]
    fn parses_pair_and_bare_integers() {
        assert_eq!(parse("l1 l2").unwrap(), Partition::pair());
        assert_eq!(parse("1 2 | 3 4").unwrap(), parse("l1 l2 | l3 l4").unwrap());
        assert_eq!(parse("  l1l2  ").unwrap(), Partition::pair());
    }

    #[test]
    fn explicit_shape() {
        assert_eq!(parse("P(0,0):").unwrap(), Partition::empty());
        assert_eq!(parse("").unwrap(), Partition::empty());
        assert_eq!(parse("P(1,1): u1 l1").unwrap(), Partition::identity());
        assert!(matches!(
            parse("P(1,2): u1 l1"),
            Err(Error::MissingPoint(_))
        ));
        assert!(matches!(
            parse("P(1,1): u1 l1 l2"),
            Err(Error::PointOutOfRange { .. })
        ));
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(
            parse("u1 u1 u2 l1 l2 |"),
            Err(Error::DuplicatePoint(_))
        ));
        assert!(matches!(parse("u1 x2"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("u0 l1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("u1 | l3"), Err(Error::MissingPoint(_))));
    }

    #[test]
    fn format_round_trip() {
        for s in ["u1 l2 | u2 l1", "l1 l2 l3 | l4", "u1 | u2 u3", "P(0,0):"] {
            let p = parse(s).unwrap();
            assert_eq!(parse(&format_with_shape(&p)).unwrap(), p);
            assert_eq!(parse(&p.to_string()).unwrap(), p);
        }
    }
}
