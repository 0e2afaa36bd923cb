//! Line-oriented text descriptors.
//!
//! ```text
//! Z: free=1 torsion=[2,4]
//! VD(principal,dvr): free=1 torsion=[p^1,p^2]
//! VD(nonprincipal): free=2 torsion=[a,b:1]
//! 2 2
//! 4 0
//! 0 6
//! ```
//!
//! `#` starts a comment. A matrix may also be written on one line with `/`
//! separating rows (`2 2 / 4 0 / 0 6`).

use num_bigint::BigInt;

use crate::abelian::FgAbGroup;
use crate::error::{Error, Result};
use crate::snf::IntMatrix;
use crate::valdom::{warfield_canonicalize, Annihilator, ValModule, ValuationRingProfile};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleSpec {
    Abelian(FgAbGroup),
    Valuation(ValModule, ValuationRingProfile),
    Matrix(IntMatrix),
}

/// Parses one descriptor. With `canonicalize`, abelian torsion lists may be
/// arbitrary cyclic orders and are normalized into a divisibility chain;
/// without it a non-chain is rejected.
pub fn parse_module_spec(text: &str, canonicalize: bool) -> Result<ModuleSpec> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let Some(&(line_no, first)) = lines.first() else {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "empty input".to_string(),
        });
    };
    let trimmed = first.trim_start();
    if trimmed.starts_with("Z:") || trimmed.starts_with("VD") {
        if let Some(&(extra, _)) = lines.get(1) {
            return Err(Error::Parse {
                line: extra,
                column: 1,
                message: "expected a single descriptor line".to_string(),
            });
        }
        let mut cur = Cursor::new(first, line_no);
        cur.skip_ws();
        return if trimmed.starts_with("Z:") {
            parse_abelian(&mut cur, canonicalize).map(ModuleSpec::Abelian)
        } else {
            parse_valuation(&mut cur).map(|(m, p)| ModuleSpec::Valuation(m, p))
        };
    }
    parse_matrix(&lines).map(ModuleSpec::Matrix)
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Cursor { text, pos: 0, line }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.text[..self.pos].chars().count() + 1,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.rest().is_empty()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{token}`")))
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|(i, c)| !(c.is_ascii_alphabetic() || *c == '_' || (*i > 0 && c.is_ascii_digit())))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return Err(self.err("expected an identifier"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest.bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(self.err("expected a non-negative integer"));
        }
        let value = rest[..len]
            .parse()
            .map_err(|_| self.err("integer out of range"))?;
        self.pos += len;
        Ok(value)
    }

    /// `[item, item, ...]`, items parsed by `item`. `|` also separates.
    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        self.expect("[")?;
        let mut out = Vec::new();
        if self.eat("]") {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat("]") {
                return Ok(out);
            }
            if !(self.eat(",") || self.eat("|")) {
                return Err(self.err("expected `,` or `]`"));
            }
        }
    }

    /// `free=<n>` and `torsion=[...]` in either order, each optional.
    fn fields<T>(
        &mut self,
        mut torsion_item: impl FnMut(&mut Self) -> Result<T>,
    ) -> Result<(usize, Vec<T>)> {
        let (mut free, mut torsion) = (None, None);
        while !self.at_end() {
            let key_pos = self.pos;
            match self.ident()? {
                "free" if free.is_none() => {
                    self.expect("=")?;
                    free = Some(self.number()? as usize);
                }
                "torsion" if torsion.is_none() => {
                    self.expect("=")?;
                    torsion = Some(self.list(&mut torsion_item)?);
                }
                other => {
                    self.pos = key_pos;
                    return Err(self.err(format!("unexpected field `{other}`")));
                }
            }
        }
        Ok((free.unwrap_or(0), torsion.unwrap_or_default()))
    }
}

fn parse_abelian(cur: &mut Cursor<'_>, canonicalize: bool) -> Result<FgAbGroup> {
    cur.expect("Z:")?;
    let (free, orders) = cur.fields(|c| c.number())?;
    if canonicalize {
        FgAbGroup::canonicalize(free, &orders)
    } else {
        FgAbGroup::new(free, orders)
    }
}

fn parse_valuation(cur: &mut Cursor<'_>) -> Result<(ValModule, ValuationRingProfile)> {
    cur.expect("VD")?;
    cur.expect("(")?;
    let (mut principal, mut dvr, mut nonprincipal) = (false, false, false);
    if !cur.eat(")") {
        loop {
            match cur.ident()? {
                "principal" => principal = true,
                "dvr" => dvr = true,
                "nonprincipal" => nonprincipal = true,
                other => return Err(cur.err(format!("unknown ring flag `{other}`"))),
            }
            if cur.eat(")") {
                break;
            }
            cur.expect(",")?;
        }
    }
    if nonprincipal && (principal || dvr) {
        return Err(Error::domain("`nonprincipal` contradicts `principal`/`dvr`"));
    }
    // A DVR always has a principal maximal ideal.
    let profile = ValuationRingProfile::new(principal || dvr, dvr)?;
    cur.expect(":")?;
    let (free, torsion) = cur.fields(|c| {
        if c.eat("p^") {
            let e = c.number()?;
            let e = u32::try_from(e).map_err(|_| c.err("exponent out of range"))?;
            if e == 0 {
                return Err(c.err("exponent must be >= 1"));
            }
            return Ok(Annihilator::PPower(e));
        }
        let tag = c.ident()?.to_string();
        let depth = if c.eat(":") {
            u32::try_from(c.number()?).map_err(|_| c.err("depth out of range"))?
        } else {
            0
        };
        Ok(Annihilator::Opaque { tag, depth })
    })?;
    let module = warfield_canonicalize(&ValModule::new(free, torsion), &profile)?;
    Ok((module, profile))
}

fn parse_matrix(lines: &[(usize, &str)]) -> Result<IntMatrix> {
    // Split one-line `a b / c d` forms into rows first.
    let mut rows: Vec<(usize, usize, &str)> = Vec::new();
    for &(no, line) in lines {
        let mut offset = 0;
        for piece in line.split('/') {
            rows.push((no, offset, piece));
            offset += piece.len() + 1;
        }
    }
    let tokens = |(no, offset, piece): (usize, usize, &str)| -> Result<Vec<BigInt>> {
        let mut out = Vec::new();
        let mut pos = 0;
        for tok in piece.split_whitespace() {
            let at = piece[pos..].find(tok).expect("token from this piece") + pos;
            pos = at + tok.len();
            out.push(tok.parse::<BigInt>().map_err(|_| Error::Parse {
                line: no,
                column: offset + at + 1,
                message: format!("`{tok}` is not an integer"),
            })?);
        }
        Ok(out)
    };
    let mut rows = rows.into_iter().filter(|(_, _, p)| !p.trim().is_empty());
    let header = rows.next().expect("caller checked non-empty");
    let dims = tokens(header)?;
    let [r, c] = dims.as_slice() else {
        return Err(Error::Parse {
            line: header.0,
            column: 1,
            message: "matrix header must be `rows cols`".to_string(),
        });
    };
    let to_dim = |x: &BigInt| -> Result<usize> {
        usize::try_from(x).map_err(|_| Error::Parse {
            line: header.0,
            column: 1,
            message: format!("bad matrix dimension {x}"),
        })
    };
    let (r, c) = (to_dim(r)?, to_dim(c)?);
    let mut entries = Vec::with_capacity(r * c);
    let mut seen = 0;
    for row in rows {
        seen += 1;
        let vals = tokens(row)?;
        if seen > r || vals.len() != c {
            return Err(Error::Parse {
                line: row.0,
                column: row.1 + 1,
                message: if seen > r {
                    format!("more than {r} rows")
                } else {
                    format!("expected {c} entries, found {}", vals.len())
                },
            });
        }
        entries.extend(vals);
    }
    if seen != r {
        let last = lines.last().map_or(1, |l| l.0);
        return Err(Error::Parse {
            line: last,
            column: 1,
            message: format!("expected {r} rows, found {seen}"),
        });
    }
    IntMatrix::new(r, c, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_examples() {
        assert_eq!(
            parse_module_spec("Z: free=1 torsion=[2,4]", false).unwrap(),
            ModuleSpec::Abelian(FgAbGroup::new(1, vec![2, 4]).unwrap())
        );
        assert_eq!(
            parse_module_spec("Z: free=0 torsion=[]", false).unwrap(),
            ModuleSpec::Abelian(FgAbGroup::zero())
        );
        assert!(matches!(
            parse_module_spec("Z: free=0 torsion=[4,2]", false),
            Err(Error::NonCanonicalChain { .. })
        ));
        assert_eq!(
            parse_module_spec("Z: free=0 torsion=[4,2]", true).unwrap(),
            ModuleSpec::Abelian(FgAbGroup::new(0, vec![2, 4]).unwrap())
        );
        assert_eq!(
            parse_module_spec("  # comment\nZ: torsion=[ 6 ] free=2  # trailing\n", false).unwrap(),
            ModuleSpec::Abelian(FgAbGroup::new(2, vec![6]).unwrap())
        );
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(
            parse_module_spec("VD(principal,dvr): free=1 torsion=[p^1]", false).unwrap(),
            ModuleSpec::Valuation(ValModule::p_powers(1, &[1]), ValuationRingProfile::DVR)
        );
        assert_eq!(
            parse_module_spec("VD(nonprincipal): free=3 torsion=[]", false).unwrap(),
            ModuleSpec::Valuation(ValModule::new(3, vec![]), ValuationRingProfile::NON_PRINCIPAL)
        );
        let ModuleSpec::Valuation(m, _) =
            parse_module_spec("VD(): torsion=[a:2, b:1]", false).unwrap()
        else {
            panic!()
        };
        assert_eq!(m.to_string(), "R/Rb ⊕ R/Ra");
        assert!(matches!(
            parse_module_spec("VD(nonprincipal): torsion=[p^1]", false),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            parse_module_spec("VD(nonprincipal,dvr): free=1", false),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn matrix_examples() {
        let ModuleSpec::Matrix(m) = parse_module_spec("2 2\n4 0\n0 6\n", false).unwrap() else {
            panic!()
        };
        assert_eq!(m, IntMatrix::from_i64(2, 2, &[4, 0, 0, 6]).unwrap());
        let ModuleSpec::Matrix(m) = parse_module_spec("2 2 / 4 0 / 0 -6", false).unwrap() else {
            panic!()
        };
        assert_eq!(m, IntMatrix::from_i64(2, 2, &[4, 0, 0, -6]).unwrap());
        let ModuleSpec::Matrix(m) = parse_module_spec("1 2\n0 0", false).unwrap() else {
            panic!()
        };
        assert_eq!((m.rows(), m.cols()), (1, 2));
    }

    #[test]
    fn error_positions() {
        let err = parse_module_spec("Z: free=x", false).unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 1,
                column: 9,
                message: "expected a non-negative integer".to_string()
            }
        );
        let err = parse_module_spec("\nZ: free=1 colour=[2]", false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 11, .. }), "{err:?}");
        let err = parse_module_spec("2 2\n1 2\n3 x\n", false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, column: 3, .. }), "{err:?}");
        let err = parse_module_spec("2 2\n1 2\n", false).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = parse_module_spec("VD(principal): torsion=[p^0]", false).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        assert!(parse_module_spec("", false).is_err());
    }
}
