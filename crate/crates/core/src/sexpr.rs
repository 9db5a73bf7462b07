//! Minimal s-expression reader used for terms and type annotations.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SexpError {
    #[error("unexpected end of input")]
    UnexpectedEof,
    #[error("unexpected `)` at offset {0}")]
    UnexpectedClose(usize),
    #[error("trailing input at offset {0}")]
    Trailing(usize),
}

impl Sexp {
    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a) => Some(a),
            Sexp::List(_) => None,
        }
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(a) => f.write_str(a),
            Sexp::List(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

fn is_delim(c: char) -> bool {
    c.is_whitespace() || c == '(' || c == ')'
}

pub fn parse(input: &str) -> Result<Sexp, SexpError> {
    let chars: Vec<(usize, char)> = input.char_indices().collect();
    let mut pos = 0;
    let value = read(&chars, &mut pos)?;
    skip_ws(&chars, &mut pos);
    if pos < chars.len() {
        return Err(SexpError::Trailing(chars[pos].0));
    }
    Ok(value)
}

fn skip_ws(chars: &[(usize, char)], pos: &mut usize) {
    while *pos < chars.len() && chars[*pos].1.is_whitespace() {
        *pos += 1;
    }
}

fn read(chars: &[(usize, char)], pos: &mut usize) -> Result<Sexp, SexpError> {
    skip_ws(chars, pos);
    let Some(&(offset, c)) = chars.get(*pos) else {
        return Err(SexpError::UnexpectedEof);
    };
    match c {
        '(' => {
            *pos += 1;
            let mut items = Vec::new();
            loop {
                skip_ws(chars, pos);
                match chars.get(*pos) {
                    None => return Err(SexpError::UnexpectedEof),
                    Some((_, ')')) => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(read(chars, pos)?),
                }
            }
        }
        ')' => Err(SexpError::UnexpectedClose(offset)),
        _ => {
            let start = *pos;
            while *pos < chars.len() && !is_delim(chars[*pos].1) {
                *pos += 1;
            }
            Ok(Sexp::Atom(chars[start..*pos].iter().map(|&(_, c)| c).collect()))
        }
    }
}
