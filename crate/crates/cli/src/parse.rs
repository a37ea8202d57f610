//! Text input: polynomials, weight lists and integer tuples.
//!
//! Polynomial grammar, one expression per file, whitespace and newlines
//! free, `#` starting a comment:
//!
//! ```text
//! [vars: x, y, ...]            optional first line
//! expr   := [+|-] term {(+|-) term}
//! term   := coeff [[*] factors] | factors
//! coeff  := int [/ int]
//! factors:= factor {[*] factor}
//! factor := name [^ int]
//! ```
//!
//! Without a header the names are `x, y, z` (dimension at least 2) or
//! `x1, x2, ...`, matching how polynomials are rendered.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use poincare_core::{ExponentVector, Polynomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

impl Pos {
    fn error(self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.column, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(String),
    Name(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(s) | Tok::Name(s) => write!(f, "`{s}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Slash => f.write_str("`/`"),
        }
    }
}

fn tokenize(lines: &[(usize, &str)]) -> Result<(Vec<(Tok, Pos)>, Pos), ParseError> {
    let mut out = Vec::new();
    let mut end = Pos { line: 1, column: 1 };
    for &(line, text) in lines {
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = Pos { line, column: i + 1 };
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            let tok = if c.is_ascii_digit() {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                Tok::Num(chars[start..i].iter().collect())
            } else if c.is_alphabetic() || c == '_' {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                Tok::Name(chars[start..i].iter().collect())
            } else {
                i += 1;
                match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '/' => Tok::Slash,
                    _ => return Err(pos.error(format!("unexpected character `{c}`"))),
                }
            };
            out.push((tok, pos));
        }
        end = Pos { line, column: chars.len() + 1 };
    }
    Ok((out, end))
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

type RawTerm = (Rational, Vec<(String, u32, Pos)>);

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.pos().error(format!("expected {wanted}, found {t}")),
            None => self.pos().error(format!("expected {wanted}, found end of input")),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        match self.toks.get(self.at) {
            Some((Tok::Num(s), p)) => {
                self.at += 1;
                Ok((s.clone(), *p))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn expression(&mut self) -> Result<Vec<RawTerm>, ParseError> {
        let mut terms = Vec::new();
        let mut negative = self.eat(&Tok::Minus);
        if !negative {
            self.eat(&Tok::Plus);
        }
        loop {
            let (mut c, factors) = self.term()?;
            if negative {
                c = -c;
            }
            terms.push((c, factors));
            if self.eat(&Tok::Plus) {
                negative = false;
            } else if self.eat(&Tok::Minus) {
                negative = true;
            } else if self.peek().is_none() {
                return Ok(terms);
            } else {
                return Err(self.unexpected("`+`, `-` or end of input"));
            }
        }
    }

    fn term(&mut self) -> Result<RawTerm, ParseError> {
        let coefficient = if matches!(self.peek(), Some(Tok::Num(_))) {
            let (num, _) = self.integer("a coefficient")?;
            let mut c = Rational::from_integer(num.parse::<BigInt>().expect("digits"));
            if self.eat(&Tok::Slash) {
                let (den, p) = self.integer("a denominator")?;
                let den = den.parse::<BigInt>().expect("digits");
                if den.is_zero() {
                    return Err(p.error("zero denominator"));
                }
                c /= Rational::from_integer(den);
            }
            if !self.eat(&Tok::Star) && !matches!(self.peek(), Some(Tok::Name(_))) {
                return Ok((c, Vec::new()));
            }
            Some(c)
        } else {
            None
        };
        let mut factors = vec![self.factor()?];
        loop {
            if self.eat(&Tok::Star) || matches!(self.peek(), Some(Tok::Name(_))) {
                factors.push(self.factor()?);
            } else {
                break;
            }
        }
        Ok((coefficient.unwrap_or_else(|| Rational::from_integer(1.into())), factors))
    }

    fn factor(&mut self) -> Result<(String, u32, Pos), ParseError> {
        let (name, pos) = match self.toks.get(self.at) {
            Some((Tok::Name(n), p)) => (n.clone(), *p),
            _ => return Err(self.unexpected("a variable")),
        };
        self.at += 1;
        let mut exponent = 1;
        if self.eat(&Tok::Caret) {
            let (e, p) = self.integer("an exponent")?;
            exponent = e.parse::<u32>().map_err(|_| p.error(format!("exponent {e} is too large")))?;
        }
        Ok((name, exponent, pos))
    }
}

/// Default names for `dim` variables, as used by rendering.
pub fn default_names(dim: usize) -> Vec<String> {
    poincare_core::lattice::default_variable_names(dim)
}

fn implicit_index(name: &str) -> Option<(bool, usize)> {
    match name {
        "x" => Some((false, 0)),
        "y" => Some((false, 1)),
        "z" => Some((false, 2)),
        _ => {
            let k: usize = name.strip_prefix('x')?.parse().ok()?;
            (k >= 1 && !name[1..].starts_with('0')).then_some((true, k - 1))
        }
    }
}

fn header(line: &str, number: usize) -> Result<Option<Vec<String>>, ParseError> {
    let trimmed = line.trim_start();
    let Some(rest) = trimmed.strip_prefix("vars:") else {
        return Ok(None);
    };
    let offset = line.len() - trimmed.len() + "vars:".len();
    let mut names: Vec<String> = Vec::new();
    let mut column = offset + 1;
    for part in rest.split(',') {
        let name = part.trim();
        let pos = Pos { line: number, column: column + part.len() - part.trim_start().len() };
        let valid = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !valid {
            return Err(pos.error(format!("invalid variable name `{name}`")));
        }
        if names.iter().any(|n| n == name) {
            return Err(pos.error(format!("variable `{name}` declared twice")));
        }
        names.push(name.to_string());
        column += part.chars().count() + 1;
    }
    Ok(Some(names))
}

/// Parses a polynomial and returns it with its variable names.
pub fn parse_polynomial(text: &str) -> Result<(Polynomial, Vec<String>), ParseError> {
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
    let first = lines.iter().position(|(_, l)| {
        let l = l.trim();
        !l.is_empty() && !l.starts_with('#')
    });
    let mut declared = None;
    let mut body = &lines[..];
    if let Some(k) = first {
        if let Some(names) = header(lines[k].1, lines[k].0)? {
            declared = Some(names);
            body = &lines[k + 1..];
        }
    }
    let (toks, end) = tokenize(body)?;
    let mut parser = Parser { toks, at: 0, end };
    let terms = parser.expression()?;

    let names = match declared {
        Some(names) => {
            for (_, factors) in &terms {
                for (n, _, p) in factors {
                    if !names.contains(n) {
                        return Err(p.error(format!("unknown variable `{n}`")));
                    }
                }
            }
            names
        }
        None => {
            let mut style = None;
            let mut dim = 0;
            for (_, factors) in &terms {
                for (n, _, p) in factors {
                    let unknown = || p.error(format!("unknown variable `{n}`; declare names with a `vars:` header"));
                    let (numbered, k) = implicit_index(n).ok_or_else(unknown)?;
                    if *style.get_or_insert(numbered) != numbered {
                        return Err(unknown());
                    }
                    dim = dim.max(k + 1);
                }
            }
            let dim = if style == Some(true) { dim } else { dim.max(2) };
            match style {
                Some(true) => (1..=dim).map(|i| format!("x{i}")).collect(),
                _ => default_names(dim),
            }
        }
    };

    let dim = names.len();
    let mut collected = Vec::with_capacity(terms.len());
    for (c, factors) in terms {
        let mut e = vec![0u32; dim];
        for (n, a, p) in factors {
            let k = names.iter().position(|m| *m == n).expect("checked above");
            e[k] = e[k].checked_add(a).ok_or_else(|| p.error("exponent overflow"))?;
        }
        collected.push((ExponentVector::new(e), c));
    }
    let p = Polynomial::from_terms(dim, collected).expect("exponents sized to the names");
    Ok((p, names))
}

/// Text that [`parse_polynomial`] reads back to the same polynomial and names.
pub fn render_polynomial(p: &Polynomial, names: &[String]) -> String {
    format!("vars: {}\n{}\n", names.join(", "), p.display_with(names))
}

fn list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, String> {
    text.split(',')
        .map(|s| s.trim().parse::<T>().map_err(|_| format!("invalid {what} `{}` in `{text}`", s.trim())))
        .collect()
}

/// `"2,3;4,3"`: valuations separated by `;`, entries by `,`.
pub fn parse_weights(text: &str) -> Result<Vec<Vec<u32>>, String> {
    let rows: Vec<Vec<u32>> = text.split(';').map(|r| list(r, "weight")).collect::<Result<_, _>>()?;
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(format!("weight rows of different lengths in `{text}`"));
    }
    Ok(rows)
}

/// `"20,28"`.
pub fn parse_naturals(text: &str) -> Result<Vec<u32>, String> {
    list(text, "nonnegative integer")
}

pub fn parse_integers(text: &str) -> Result<Vec<i64>, String> {
    list(text, "integer")
}

/// `"1;0,1"`: semicolon-separated integer vectors.
pub fn parse_integer_rows(text: &str) -> Result<Vec<Vec<i64>>, String> {
    text.split(';').map(parse_integers).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Polynomial {
        parse_polynomial(text).unwrap().0
    }

    fn support(p: &Polynomial) -> Vec<Vec<u32>> {
        p.support().map(|e| e.entries().to_vec()).collect()
    }

    #[test]
    fn plane_examples() {
        assert_eq!(support(&parse("x^6*y^2 + y^8")), vec![vec![0, 8], vec![6, 2]]);
        assert_eq!(support(&parse("x^2 + y^3")), vec![vec![0, 3], vec![2, 0]]);
        assert!(parse("2x - 2x").is_zero());
        assert!(parse("0").is_zero());
        assert_eq!(parse("x y + x*y"), parse("2 x^1 y"));
    }

    #[test]
    fn rational_coefficients_and_signs() {
        let p = parse("-1/2 x^2 + 3/4*y - 5");
        assert_eq!(p.coefficient(&ExponentVector::new(vec![2, 0])), Rational::new((-1).into(), 2.into()));
        assert_eq!(p.coefficient(&ExponentVector::new(vec![0, 1])), Rational::new(3.into(), 4.into()));
        assert_eq!(p.constant_term(), Rational::from_integer((-5).into()));
    }

    #[test]
    fn headers_and_dimensions() {
        let (p, names) = parse_polynomial("# germ\nvars: u, v, w\nu^2 + w\n").unwrap();
        assert_eq!(names, ["u", "v", "w"]);
        assert_eq!(p.dim(), 3);
        assert_eq!(parse("x^5").dim(), 2);
        assert_eq!(parse("x + z").dim(), 3);
        assert_eq!(parse("x2 + x5^3").dim(), 5);
    }

    #[test]
    fn errors_point_at_the_problem() {
        let e = parse_polynomial("x^2 +\n  y^^3").unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));
        let e = parse_polynomial("vars: x,y\nx + q").unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));
        assert!(e.message.contains("unknown variable `q`"));
        assert!(parse_polynomial("x + x1").unwrap_err().message.contains("unknown variable"));
        assert!(parse_polynomial("").unwrap_err().message.contains("end of input"));
        assert!(parse_polynomial("x/0").is_err());
        assert!(parse_polynomial("1/0").unwrap_err().message.contains("zero denominator"));
        assert!(parse_polynomial("x $ y").unwrap_err().message.contains("unexpected character"));
        assert!(parse_polynomial("vars: x, x\nx").unwrap_err().message.contains("twice"));
    }

    #[test]
    fn list_syntax() {
        assert_eq!(parse_weights("2,3;4,3").unwrap(), vec![vec![2, 3], vec![4, 3]]);
        assert!(parse_weights("2,3;4").is_err());
        assert!(parse_weights("2,-3").is_err());
        assert_eq!(parse_naturals(" 20, 28").unwrap(), vec![20, 28]);
        assert_eq!(parse_integer_rows("1;0,-1").unwrap(), vec![vec![1], vec![0, -1]]);
    }
}
