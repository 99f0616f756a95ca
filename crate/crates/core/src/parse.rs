//! Tokenizer and term parser shared by polynomial and operator text.
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := coeff ('*' factor)* | factor ('*' factor)*
//! factor := name ('^' nat)?
//! coeff  := integer | integer '/' integer
//! ```
//!
//! Whitespace is insignificant; multiplication is always explicit.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{AlgebraError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(text[start..i].parse().expect("digits")), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            other => {
                return Err(AlgebraError::Parse {
                    pos: start,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RawFactor {
    pub name: String,
    pub exp: u32,
    pub pos: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RawTerm {
    pub negative: bool,
    /// `(numerator, denominator)`; `None` means an implicit `1`.
    pub coeff: Option<(BigInt, BigInt)>,
    pub factors: Vec<RawFactor>,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(AlgebraError::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        self.at += 1;
        t
    }

    fn nat(&mut self) -> Result<u32> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let v = u32::try_from(n).or_else(|_| self.err("exponent too large"))?;
                self.at += 1;
                Ok(v)
            }
            _ => self.err("expected a natural number exponent"),
        }
    }

    fn factor(&mut self) -> Result<RawFactor> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Ident(name)) => {
                let exp = if self.peek() == Some(&Tok::Caret) {
                    self.at += 1;
                    self.nat()?
                } else {
                    1
                };
                Ok(RawFactor { name, exp, pos })
            }
            _ => {
                self.at -= 1;
                self.err("expected a variable")
            }
        }
    }

    fn term(&mut self, negative: bool) -> Result<RawTerm> {
        let mut coeff = None;
        let mut factors = Vec::new();
        match self.peek() {
            Some(Tok::Int(_)) => {
                let Some(Tok::Int(num)) = self.bump() else {
                    unreachable!()
                };
                let den = if self.peek() == Some(&Tok::Slash) {
                    self.at += 1;
                    match self.bump() {
                        Some(Tok::Int(d)) if d != BigInt::from(0) => d,
                        Some(Tok::Int(_)) => {
                            self.at -= 1;
                            return self.err("zero denominator");
                        }
                        _ => {
                            self.at -= 1;
                            return self.err("expected a denominator");
                        }
                    }
                } else {
                    BigInt::one()
                };
                coeff = Some((num, den));
            }
            Some(Tok::Ident(_)) => factors.push(self.factor()?),
            _ => return self.err("expected a term"),
        }
        while self.peek() == Some(&Tok::Star) {
            self.at += 1;
            factors.push(self.factor()?);
        }
        Ok(RawTerm {
            negative,
            coeff,
            factors,
        })
    }

    fn sum(&mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        let mut negative = match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                true
            }
            Some(Tok::Plus) => {
                self.at += 1;
                false
            }
            _ => false,
        };
        loop {
            terms.push(self.term(negative)?);
            match self.bump() {
                None => return Ok(terms),
                Some(Tok::Plus) => negative = false,
                Some(Tok::Minus) => negative = true,
                Some(_) => {
                    self.at -= 1;
                    return self.err("expected `+`, `-` or `*`");
                }
            }
        }
    }
}

/// Parses a sum of terms; names are left unresolved.
pub(crate) fn parse_terms(text: &str) -> Result<Vec<RawTerm>> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
    };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    p.sum()
}

fn split_name(s: &str) -> (&str, Option<u64>) {
    let cut = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    (&s[..cut], s[cut..].parse().ok())
}

/// Orders variable names alphabetically with numeric suffixes compared as numbers
/// (`x2` before `x10`).
pub fn sort_var_names(names: &mut [String]) {
    names.sort_by(|a, b| {
        let (pa, na) = split_name(a);
        let (pb, nb) = split_name(b);
        pa.cmp(pb).then(na.cmp(&nb)).then_with(|| a.cmp(b))
    });
}

/// Collects the identifiers occurring in the given expressions and returns them
/// sorted with [`sort_var_names`]. Derivative tokens (`d1`, `dx` when `x` is
/// itself a name) are skipped; `dx` alone contributes `x`.
pub fn infer_vars<'a>(texts: impl IntoIterator<Item = &'a str>) -> Vec<String> {
    let mut idents: Vec<String> = Vec::new();
    for text in texts {
        if let Ok(toks) = tokenize(text) {
            for (t, _) in toks {
                if let Tok::Ident(name) = t {
                    if !idents.contains(&name) {
                        idents.push(name);
                    }
                }
            }
        }
    }
    let mut vars: Vec<String> = Vec::new();
    for name in &idents {
        let var = match name.strip_prefix('d') {
            Some(rest) if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) => None,
            Some(rest)
                if !rest.is_empty()
                    && (idents.iter().any(|n| n == rest) || rest.len() == 1) =>
            {
                Some(rest.to_string())
            }
            _ => Some(name.clone()),
        };
        if let Some(v) = var {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
    }
    sort_var_names(&mut vars);
    vars
}
