//! The line-oriented `.dga` text format for free DGAs.
//!
//! ```text
//! # comment
//! field 2            # a prime, or Q
//! gen a : 1
//! gen x : 0
//! diff a = 1 - x*x   # words are `*`-separated, order matters
//! aug x = 1
//! ```
//!
//! Coefficients are integers or `n/d`; a bare coefficient is a multiple of
//! the unit. Generators must be declared before they are used, `field`
//! must come first, and each generator has at most one `diff` and one `aug`
//! line. Missing differentials are zero.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::dga::{Augmentation, FreeDga};
use crate::freealg::{Alphabet, GenId, NCPoly, Word};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Undeclared,
    Duplicate,
    NonPrime,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Undeclared => "undeclared name",
            ParseErrorKind::Duplicate => "duplicate declaration",
            ParseErrorKind::NonPrime => "non-prime field modulus",
        };
        f.write_str(s)
    }
}

/// A diagnostic with a 1-based line and column (in characters).
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgaDocument {
    pub dga: FreeDga,
    /// Present iff the text has at least one `aug` line.
    pub augmentation: Option<Augmentation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

struct Line {
    number: usize,
    tokens: Vec<Token>,
    end: usize,
    pos: usize,
}

fn err(line: usize, column: usize, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        kind,
        message: message.into(),
    }
}

fn tokenize(number: usize, text: &str) -> Result<Line, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            tokens.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            tokens.push(Token {
                tok: Tok::Num(chars[start..i].iter().collect()),
                col,
            });
        } else if "+-*/=:".contains(c) {
            tokens.push(Token { tok: Tok::Sym(c), col });
            i += 1;
        } else {
            return Err(err(number, col, ParseErrorKind::Syntax, format!("unexpected character `{c}`")));
        }
    }
    let end = chars
        .iter()
        .position(|&c| c == '#')
        .unwrap_or(chars.len())
        + 1;
    Ok(Line {
        number,
        tokens,
        end,
        pos: 0,
    })
}

impl Line {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.col)
    }

    fn error(&self, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
        err(self.number, self.col(), kind, message)
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of line".into(),
            Some(Tok::Ident(s)) | Some(Tok::Num(s)) => format!("`{s}`"),
            Some(Tok::Sym(c)) => format!("`{c}`"),
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(ParseErrorKind::Syntax, format!("expected `{c}`, found {}", self.describe())))
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        let col = self.col();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok((s, col))
            }
            _ => Err(self.error(ParseErrorKind::Syntax, format!("expected {what}, found {}", self.describe()))),
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(self.error(ParseErrorKind::Syntax, format!("unexpected {}", self.describe())))
        }
    }
}

struct Parser {
    field: Option<Field>,
    alphabet: Alphabet,
    diffs: BTreeMap<GenId, NCPoly>,
    augs: BTreeMap<GenId, Scalar>,
}

impl Parser {
    fn field(&self, line: &Line) -> Result<Field, ParseError> {
        self.field
            .ok_or_else(|| line.error(ParseErrorKind::Syntax, "`field` must be declared first"))
    }

    fn lookup(&self, line: &Line, name: &str, col: usize) -> Result<GenId, ParseError> {
        self.alphabet
            .id(name)
            .ok_or_else(|| err(line.number, col, ParseErrorKind::Undeclared, format!("`{name}` is not declared")))
    }

    /// `digits` or `digits/digits`, read into `field`.
    fn coefficient(&self, line: &mut Line, field: Field) -> Result<Scalar, ParseError> {
        let col = line.col();
        let num = match line.peek() {
            Some(Tok::Num(s)) => s.clone(),
            _ => {
                return Err(line.error(
                    ParseErrorKind::Syntax,
                    format!("expected a number, found {}", line.describe()),
                ))
            }
        };
        line.pos += 1;
        let n: BigInt = num.parse().expect("digit string");
        if !line.eat_sym('/') {
            return Ok(field.from_bigint(&n));
        }
        let den = match line.peek() {
            Some(Tok::Num(s)) => s.clone(),
            _ => {
                return Err(line.error(
                    ParseErrorKind::Syntax,
                    format!("expected a denominator, found {}", line.describe()),
                ))
            }
        };
        line.pos += 1;
        let d: BigInt = den.parse().expect("digit string");
        field.from_ratio(&n, &d).map_err(|_| {
            err(
                line.number,
                col,
                ParseErrorKind::Syntax,
                format!("coefficient {num}/{den} is undefined over {field}"),
            )
        })
    }

    fn word(&self, line: &mut Line, first: Option<(String, usize)>) -> Result<Word, ParseError> {
        let mut letters = Vec::new();
        if let Some((name, col)) = first {
            letters.push(self.lookup(line, &name, col)?);
        }
        while line.eat_sym('*') {
            let (name, col) = line.expect_ident("a generator name")?;
            letters.push(self.lookup(line, &name, col)?);
        }
        Ok(Word::new(letters))
    }

    fn term(&self, line: &mut Line, field: Field) -> Result<(Scalar, Word), ParseError> {
        match line.peek() {
            Some(Tok::Num(_)) => {
                let c = self.coefficient(line, field)?;
                let w = self.word(line, None)?;
                Ok((c, w))
            }
            Some(Tok::Ident(_)) => {
                let first = line.expect_ident("a term")?;
                let w = self.word(line, Some(first))?;
                Ok((field.one(), w))
            }
            _ => Err(line.error(ParseErrorKind::Syntax, format!("expected a term, found {}", line.describe()))),
        }
    }

    fn expr(&self, line: &mut Line, field: Field) -> Result<NCPoly, ParseError> {
        let mut p = NCPoly::zero(field);
        let mut negative = if line.eat_sym('-') {
            true
        } else {
            line.eat_sym('+');
            false
        };
        loop {
            let (c, w) = self.term(line, field)?;
            p.add_term(w, if negative { -c } else { c });
            if line.eat_sym('+') {
                negative = false;
            } else if line.eat_sym('-') {
                negative = true;
            } else {
                break;
            }
        }
        line.expect_end()?;
        Ok(p)
    }

    fn statement(&mut self, line: &mut Line) -> Result<(), ParseError> {
        let (kw, kw_col) = line.expect_ident("a keyword")?;
        match kw.as_str() {
            "field" => {
                if self.field.is_some() {
                    return Err(err(line.number, kw_col, ParseErrorKind::Duplicate, "field declared twice"));
                }
                let f = match line.peek() {
                    Some(Tok::Ident(s)) if s == "Q" => Field::Rationals,
                    Some(Tok::Num(s)) => {
                        let p: u64 = s
                            .parse()
                            .map_err(|_| line.error(ParseErrorKind::NonPrime, format!("{s} is not a prime")))?;
                        Field::prime(p)
                            .map_err(|_| line.error(ParseErrorKind::NonPrime, format!("{p} is not a prime")))?
                    }
                    _ => {
                        return Err(line.error(
                            ParseErrorKind::Syntax,
                            format!("expected a prime or `Q`, found {}", line.describe()),
                        ))
                    }
                };
                line.pos += 1;
                line.expect_end()?;
                self.field = Some(f);
            }
            "gen" => {
                self.field(line)?;
                let (name, col) = line.expect_ident("a generator name")?;
                line.expect_sym(':')?;
                let neg = line.eat_sym('-');
                let dcol = line.col();
                let degree = match line.peek() {
                    Some(Tok::Num(s)) => s.parse::<i64>().map_err(|_| {
                        err(line.number, dcol, ParseErrorKind::Syntax, "degree out of range")
                    })?,
                    _ => {
                        return Err(line.error(
                            ParseErrorKind::Syntax,
                            format!("expected a degree, found {}", line.describe()),
                        ))
                    }
                };
                line.pos += 1;
                line.expect_end()?;
                if self.alphabet.id(&name).is_some() {
                    return Err(err(
                        line.number,
                        col,
                        ParseErrorKind::Duplicate,
                        format!("generator `{name}` declared twice"),
                    ));
                }
                self.alphabet
                    .push(name, if neg { -degree } else { degree })
                    .expect("name checked unique");
            }
            "diff" => {
                let field = self.field(line)?;
                let (name, col) = line.expect_ident("a generator name")?;
                let g = self.lookup(line, &name, col)?;
                line.expect_sym('=')?;
                let p = self.expr(line, field)?;
                if self.diffs.insert(g, p).is_some() {
                    return Err(err(
                        line.number,
                        col,
                        ParseErrorKind::Duplicate,
                        format!("second differential for `{name}`"),
                    ));
                }
            }
            "aug" => {
                let field = self.field(line)?;
                let (name, col) = line.expect_ident("a generator name")?;
                let g = self.lookup(line, &name, col)?;
                line.expect_sym('=')?;
                let neg = line.eat_sym('-');
                let c = self.coefficient(line, field)?;
                line.expect_end()?;
                if self.augs.insert(g, if neg { -c } else { c }).is_some() {
                    return Err(err(
                        line.number,
                        col,
                        ParseErrorKind::Duplicate,
                        format!("second augmentation value for `{name}`"),
                    ));
                }
            }
            other => {
                return Err(err(
                    line.number,
                    kw_col,
                    ParseErrorKind::Syntax,
                    format!("unknown keyword `{other}`"),
                ))
            }
        }
        Ok(())
    }
}

pub fn parse(text: &str) -> Result<DgaDocument, ParseError> {
    let mut parser = Parser {
        field: None,
        alphabet: Alphabet::new(),
        diffs: BTreeMap::new(),
        augs: BTreeMap::new(),
    };
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        last = i + 1;
        let mut line = tokenize(i + 1, raw)?;
        if line.tokens.is_empty() {
            continue;
        }
        parser.statement(&mut line)?;
    }
    let field = parser
        .field
        .ok_or_else(|| err(last.max(1), 1, ParseErrorKind::Syntax, "missing `field` declaration"))?;
    let n = parser.alphabet.len();
    let mut diffs = vec![NCPoly::zero(field); n];
    for (g, p) in parser.diffs {
        diffs[g.index()] = p;
    }
    let augmentation = (!parser.augs.is_empty()).then(|| {
        let mut eps = Augmentation::zero(field, n);
        for (g, v) in &parser.augs {
            eps.set(*g, v.clone());
        }
        eps
    });
    let dga = FreeDga::new(field, parser.alphabet, diffs).expect("parsed data is consistent");
    Ok(DgaDocument { dga, augmentation })
}

/// Canonical text: generators in declaration order, then nonzero
/// differentials, then nonzero augmentation values.
pub fn serialize(d: &FreeDga, eps: Option<&Augmentation>) -> String {
    let al = d.alphabet();
    let mut out = format!("field {}\n", d.field());
    for g in al.iter() {
        out.push_str(&format!("gen {} : {}\n", g.name, g.degree));
    }
    for (i, g) in al.iter().enumerate() {
        let p = d.d(GenId(i as u32));
        if !p.is_zero() {
            out.push_str(&format!("diff {} = {}\n", g.name, p.display(al)));
        }
    }
    if let Some(eps) = eps {
        for (g, v) in al.iter().zip(eps.values()) {
            if !v.is_zero() {
                out.push_str(&format!("aug {} = {}\n", g.name, v));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda_family::{build_ce_dga, canonical_augmentation, KnotParams};

    #[test]
    fn small_example() {
        let doc = parse("field 2\ngen a : 1\ngen x : 0\ndiff a = 1 - x*x").unwrap();
        assert_eq!(doc.dga.num_generators(), 2);
        assert_eq!(doc.dga.field(), Field::F2);
        let al = doc.dga.alphabet();
        assert_eq!(doc.dga.d_of("a").unwrap().display(al).to_string(), "1 + x*x");
        assert!(doc.augmentation.is_none());
    }

    #[test]
    fn rationals_and_comments() {
        let text = "# header\nfield Q\ngen a : -1 # negative degree\ngen b : 0\ndiff a = -3/2*b*b + 2*b - 1\naug b = -1/2\n";
        let doc = parse(text).unwrap();
        let al = doc.dga.alphabet();
        assert_eq!(doc.dga.d_of("a").unwrap().display(al).to_string(), "-1 + 2*b - 3/2*b*b");
        assert_eq!(doc.augmentation.unwrap().values()[1].to_string(), "-1/2");
    }

    #[test]
    fn undeclared_name_points_at_token() {
        let e = parse("field 2\ngen a : 1\ndiff a = b").unwrap_err();
        assert_eq!((e.line, e.column, e.kind), (3, 10, ParseErrorKind::Undeclared));
    }

    #[test]
    fn error_classes() {
        let kind = |t: &str| parse(t).unwrap_err().kind;
        assert_eq!(kind("field 4"), ParseErrorKind::NonPrime);
        assert_eq!(kind("field 2\ngen a : 1\ngen a : 0"), ParseErrorKind::Duplicate);
        assert_eq!(kind("field 2\ngen a : 1\ndiff a = 0\ndiff a = 0"), ParseErrorKind::Duplicate);
        assert_eq!(kind("field 2\nfield 3"), ParseErrorKind::Duplicate);
        assert_eq!(kind("gen a : 1"), ParseErrorKind::Syntax);
        assert_eq!(kind("field 2\ngen a : 1\ndiff a = a +"), ParseErrorKind::Syntax);
        assert_eq!(kind("field 2\ngen a : 1\ndiff a = 1/2"), ParseErrorKind::Syntax);
        assert_eq!(kind("field 2\ngen a ; 1"), ParseErrorKind::Syntax);
        assert_eq!(kind(""), ParseErrorKind::Syntax);
    }

    #[test]
    fn syntax_error_at_end_of_line() {
        let e = parse("field 2\ngen a : 1\ndiff a = a *").unwrap_err();
        assert_eq!((e.line, e.column), (3, 13));
    }

    #[test]
    fn family_round_trip() {
        let k = KnotParams::new(2, 2, 3, 3).unwrap();
        for field in [Field::F2, Field::Rationals] {
            let d = build_ce_dga(&k, field).unwrap();
            let eps = canonical_augmentation(&k, field);
            let text = serialize(&d, Some(&eps));
            let doc = parse(&text).unwrap();
            assert_eq!(doc.dga, d);
            assert_eq!(doc.augmentation.as_ref(), Some(&eps));
            assert_eq!(serialize(&doc.dga, doc.augmentation.as_ref()), text);
        }
    }
}
