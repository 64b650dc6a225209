//! Text grammar for quasi-polynomials.
//!
//! ```text
//! poly   := term (('+' | '-') term)*
//! term   := rational? factor+        (a bare rational is a constant term)
//! factor := atom ('^' INT)?
//! atom   := 'x' INT | 'c[' INT ',' INT ',' INT ']' | 'tr(' word ')' | '(' poly ')'
//! word   := 'x' INT ('*' 'x' INT)*
//! ```
//!
//! Whitespace is ignored, juxtaposition multiplies in textual order and an
//! explicit `*` between factors is allowed.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use quasident::freealg::QuasiPoly;
use quasident::genmat::TraceWord;
use quasident::ratpoly::{CPoly, Rational, Var};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    X(u32),
    C,
    Tr,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(i) => format!("number {i}"),
            Tok::X(k) => format!("x{k}"),
            Tok::C => "c".into(),
            Tok::Tr => "tr".into(),
            Tok::End => "end of input".into(),
            t => format!("'{}'", punct(t)),
        }
    }
}

fn punct(t: &Tok) -> char {
    match t {
        Tok::Plus => '+',
        Tok::Minus => '-',
        Tok::Star => '*',
        Tok::Slash => '/',
        Tok::Caret => '^',
        Tok::Comma => ',',
        Tok::LParen => '(',
        Tok::RParen => ')',
        Tok::LBracket => '[',
        Tok::RBracket => ']',
        _ => '?',
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

fn syntax(pos: Pos, message: impl Into<String>) -> CliError {
    CliError::Syntax {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, CliError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut k, mut line, mut col) = (0, 1, 1);
    let digits = |k: &mut usize, col: &mut usize| {
        let start = *k;
        while *k < chars.len() && chars[*k].is_ascii_digit() {
            *k += 1;
            *col += 1;
        }
        chars[start..*k].iter().collect::<String>()
    };
    while k < chars.len() {
        let ch = chars[k];
        let pos = Pos { line, column: col };
        if ch == '\n' {
            k += 1;
            line += 1;
            col = 1;
            continue;
        }
        if ch.is_whitespace() {
            k += 1;
            col += 1;
            continue;
        }
        let tok = match ch {
            '0'..='9' => {
                let s = digits(&mut k, &mut col);
                out.push((Tok::Int(s.parse().expect("ascii digits")), pos));
                continue;
            }
            'x' => {
                k += 1;
                col += 1;
                let s = digits(&mut k, &mut col);
                let idx: u32 = s.parse().map_err(|_| syntax(pos, "expected a generator index after 'x'"))?;
                if idx == 0 {
                    return Err(syntax(pos, "generator indices start at 1"));
                }
                out.push((Tok::X(idx), pos));
                continue;
            }
            'c' => Tok::C,
            't' if chars.get(k + 1) == Some(&'r') => {
                k += 1;
                col += 1;
                Tok::Tr
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            ',' => Tok::Comma,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            other => return Err(syntax(pos, format!("unexpected character '{other}'"))),
        };
        k += 1;
        col += 1;
        out.push((tok, pos));
    }
    out.push((Tok::End, Pos { line, column: col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    n: Option<usize>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), CliError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(
                self.pos(),
                format!("expected {}, found {}", want.describe(), self.peek().describe()),
            ))
        }
    }

    fn small_int(&mut self, what: &str) -> Result<u32, CliError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(i) => u32::try_from(&i).map_err(|_| syntax(pos, format!("{what} is too large"))),
            t => Err(syntax(pos, format!("expected {what}, found {}", t.describe()))),
        }
    }

    fn poly(&mut self) -> Result<QuasiPoly, CliError> {
        let mut acc = QuasiPoly::zero();
        let mut negate = false;
        match self.peek() {
            Tok::Minus => {
                self.bump();
                negate = true;
            }
            Tok::Plus => {
                self.bump();
            }
            _ => {}
        }
        loop {
            let t = self.term()?;
            if negate {
                acc -= &t;
            } else {
                acc += &t;
            }
            match self.peek() {
                Tok::Plus => negate = false,
                Tok::Minus => negate = true,
                _ => return Ok(acc),
            }
            self.bump();
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::X(_) | Tok::C | Tok::Tr | Tok::LParen)
    }

    fn term(&mut self) -> Result<QuasiPoly, CliError> {
        let start = self.pos();
        let mut coeff = None;
        if let Tok::Int(num) = self.peek().clone() {
            self.bump();
            let mut r = Rational::from_integer(num);
            if *self.peek() == Tok::Slash {
                self.bump();
                let pos = self.pos();
                match self.bump() {
                    Tok::Int(d) if !d.is_zero() => r /= Rational::from_integer(d),
                    Tok::Int(_) => return Err(syntax(pos, "division by zero")),
                    t => return Err(syntax(pos, format!("expected a denominator, found {}", t.describe()))),
                }
            }
            coeff = Some(r);
        }
        let mut acc = QuasiPoly::constant(coeff.clone().unwrap_or_else(Rational::one));
        let mut factors = 0;
        loop {
            if *self.peek() == Tok::Star && (factors > 0 || coeff.is_some()) {
                self.bump();
                if !self.starts_atom() {
                    return Err(syntax(self.pos(), format!("expected a factor, found {}", self.peek().describe())));
                }
            }
            if !self.starts_atom() {
                break;
            }
            let f = self.factor()?;
            acc = &acc * &f;
            factors += 1;
        }
        if factors == 0 && coeff.is_none() {
            return Err(syntax(start, format!("expected a term, found {}", self.peek().describe())));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<QuasiPoly, CliError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let e = self.small_int("an exponent")?;
        let mut out = QuasiPoly::one();
        for _ in 0..e {
            out = &out * &base;
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<QuasiPoly, CliError> {
        let pos = self.pos();
        match self.bump() {
            Tok::X(k) => Ok(QuasiPoly::generator(k)),
            Tok::C => {
                self.expect(Tok::LBracket)?;
                let k = self.small_int("a generator index")?;
                self.expect(Tok::Comma)?;
                let i = self.small_int("a row index")?;
                self.expect(Tok::Comma)?;
                let j = self.small_int("a column index")?;
                self.expect(Tok::RBracket)?;
                if k == 0 || i == 0 || j == 0 {
                    return Err(syntax(pos, "indices of c[k,i,j] start at 1"));
                }
                Ok(QuasiPoly::from_cpoly(CPoly::var(Var::new(k, i, j))))
            }
            Tok::Tr => {
                self.expect(Tok::LParen)?;
                let mut letters = Vec::new();
                loop {
                    let p = self.pos();
                    match self.bump() {
                        Tok::X(k) => letters.push(k),
                        t => return Err(syntax(p, format!("expected a generator inside tr(...), found {}", t.describe()))),
                    }
                    if *self.peek() == Tok::Star {
                        self.bump();
                    } else if matches!(self.peek(), Tok::X(_)) {
                        continue;
                    } else {
                        break;
                    }
                }
                self.expect(Tok::RParen)?;
                let n = self.n.ok_or(CliError::DimensionRequired {
                    line: pos.line,
                    column: pos.column,
                })?;
                Ok(QuasiPoly::from_cpoly(TraceWord::new(letters).expand(n)))
            }
            Tok::LParen => {
                let inner = self.poly()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            t => Err(syntax(pos, format!("expected a factor, found {}", t.describe()))),
        }
    }
}

/// Parses one quasi-polynomial. `n` is needed only to expand `tr(...)`.
pub fn parse_quasipoly(text: &str, n: Option<usize>) -> Result<QuasiPoly, CliError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        n,
    };
    let out = p.poly()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.pos(), format!("unexpected {}", p.peek().describe())));
    }
    Ok(out)
}

/// Parses a list of quasi-polynomials, one per non-empty line.
pub fn parse_quasipoly_list(text: &str, n: Option<usize>) -> Result<Vec<QuasiPoly>, CliError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let p = parse_quasipoly(line, n).map_err(|e| e.shift_line(idx))?;
        out.push(p);
    }
    Ok(out)
}
