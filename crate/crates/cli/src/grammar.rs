//! Input documents: lexer, recursive-descent parser and canonical printer.

use std::fmt;

use crformal::hypersurface::Convention;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub const GRAMMAR: &str = r##"document   := { statement ( NEWLINE | ";" ) }
statement  := "degree" "=" INT
            | "convention" "=" ( "2i" | "i" )
            | "seed" "=" INT
            | NAME "=" definition
            | "classify" NAME
            | "check-map" NAME ":" NAME "->" NAME
            | "prolong" NAME "," "b" "=" "[" expr { "," expr } "]" "," "alpha" "=" "(" INT { "," INT } ")"
            | "verify" ( "finite_type" | "infinite_type" | "linear_part" | "all" )
            | "examples"
definition := "hypersurface" "(" ( "Q" | "phi" ) "=" expr ")"
            | "heisenberg" "(" INT ")"
            | "m_psi" "(" expr { "," expr } ")"
            | "blowup" "(" INT "," INT ")"
            | "exp_model" "(" INT ")"
            | "remark" "(" ")"
            | "map" "(" "F" "=" ( expr | "[" expr { "," expr } "]" ) "," "G" "=" expr ")"
            | expr
expr       := term { ( "+" | "-" ) term }
term       := unary { ( "*" | "/" ) unary }
unary      := "-" unary | power
power      := primary [ "^" INT ]
primary    := NUMBER [ "/" NUMBER ] | "i" | VARIABLE | NAME
            | "exp" "(" expr ")" | "sqrt" "(" NUMBER [ "/" NUMBER ] ")" | "(" expr ")"
NUMBER     := digits [ "." digits ]
VARIABLE   := z | chi | tau | w | z<k> | chi<k>      (z stands for z1)

Variables by context:
  hypersurface Q or phi : z1..zn, chi1..chin, tau    (n = largest index used)
  map components        : z1..zn, w                  (n = number of F components)
  m_psi components      : z1..zn
  prolong A and b       : z1..zn, chi1..chin
A named series may be used inside later expressions and is evaluated in the
context where it is used. A series name given to classify is read as Q.
Division is allowed by any series with nonzero constant term.
Comments run from "#" to the end of the line."##;

/// Source position; positions never take part in equality.
#[derive(Debug, Clone, Copy, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Pos {}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(BigRational),
    I,
    Var(String, Pos),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Exp(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Definition {
    Series(Expr),
    HypersurfaceQ(Expr),
    HypersurfacePhi(Expr),
    Heisenberg(u32),
    MPsi(Vec<Expr>),
    Blowup(u32, u32),
    ExpModel(u32),
    Remark,
    Map { f: Vec<Expr>, g: Expr },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    FiniteType,
    InfiniteType,
    LinearPart,
    All,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::FiniteType => "finite_type",
            Suite::InfiniteType => "infinite_type",
            Suite::LinearPart => "linear_part",
            Suite::All => "all",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "finite_type" => Suite::FiniteType,
            "infinite_type" => Suite::InfiniteType,
            "linear_part" => Suite::LinearPart,
            "all" => Suite::All,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Degree(u32),
    Convention(Convention),
    Seed(u64),
    Let {
        name: String,
        pos: Pos,
        def: Definition,
    },
    Classify {
        name: String,
        pos: Pos,
    },
    CheckMap {
        map: String,
        source: String,
        target: String,
        pos: Pos,
    },
    Prolong {
        a: String,
        b: Vec<Expr>,
        alpha: Vec<u32>,
        pos: Pos,
    },
    Verify(Suite),
    Examples,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    pub statements: Vec<Statement>,
}

impl Document {
    pub fn degree(&self) -> Option<u32> {
        self.statements.iter().rev().find_map(|s| match s {
            Statement::Degree(d) => Some(*d),
            _ => None,
        })
    }

    pub fn convention(&self) -> Option<Convention> {
        self.statements.iter().rev().find_map(|s| match s {
            Statement::Convention(c) => Some(*c),
            _ => None,
        })
    }

    pub fn seed(&self) -> Option<u64> {
        self.statements.iter().rev().find_map(|s| match s {
            Statement::Seed(c) => Some(*c),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Sym(&'static str),
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "number {n}"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Newline => f.write_str("end of line"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const SYMBOLS: [&str; 14] = [
    "->", "=", "(", ")", "[", "]", ",", ";", ":", "+", "-", "*", "/", "^",
];

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            out.push((Tok::Newline, pos));
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let int: String = chars[start..i].iter().collect();
            let mut value = BigRational::from_integer(int.parse::<BigInt>().expect("digits"));
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                let fs = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let frac: String = chars[fs..i].iter().collect();
                let den = BigInt::from(10).pow(frac.len() as u32);
                value += BigRational::new(frac.parse::<BigInt>().expect("digits"), den);
            }
            col += i - start;
            out.push((Tok::Num(value), pos));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let mut word: String = chars[start..i].iter().collect();
            if word == "check" && chars[i..].starts_with(&['-', 'm', 'a', 'p']) {
                i += 4;
                word.push_str("-map");
            }
            col += i - start;
            out.push((Tok::Ident(word), pos));
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                i += s.len();
                col += s.len();
                out.push((Tok::Sym(s), pos));
            }
            None => return err(pos, format!("unexpected character `{c}`")),
        }
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

const KEYWORDS: [&str; 10] = [
    "degree",
    "convention",
    "seed",
    "classify",
    "check-map",
    "prolong",
    "verify",
    "examples",
    "i",
    "exp",
];

/// Is `name` a coordinate: `z`, `chi`, `tau`, `w`, `z<k>` or `chi<k>`?
pub fn is_variable(name: &str) -> bool {
    matches!(name, "z" | "chi" | "tau" | "w")
        || ["z", "chi"].iter().any(|p| {
            name.strip_prefix(p).is_some_and(|k| {
                !k.is_empty() && k.chars().all(|c| c.is_ascii_digit()) && !k.starts_with('0')
            })
        })
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.is_sym(s) {
            self.bump();
            Ok(())
        } else {
            err(self.pos(), format!("expected `{s}`, found {}", self.peek()))
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(x) if x == w => {
                self.bump();
                Ok(())
            }
            other => err(self.pos(), format!("expected `{w}`, found {other}")),
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        match self.bump() {
            (Tok::Ident(s), p) => Ok((s, p)),
            (t, p) => err(p, format!("expected a name, found {t}")),
        }
    }

    fn name(&mut self) -> Result<(String, Pos), ParseError> {
        let (s, p) = self.ident()?;
        if KEYWORDS.contains(&s.as_str()) || is_variable(&s) {
            return err(p, format!("`{s}` is reserved and cannot name an object"));
        }
        Ok((s, p))
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        match self.bump() {
            (Tok::Num(n), _) if n.is_integer() => Ok(n.to_integer()),
            (t, p) => err(p, format!("expected an integer, found {t}")),
        }
    }

    fn small<T: TryFrom<BigInt>>(&mut self) -> Result<T, ParseError> {
        let p = self.pos();
        let v = self.integer()?;
        T::try_from(v).or_else(|_| err(p, "integer out of range"))
    }

    fn end_of_statement(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Newline | Tok::Sym(";") => {
                self.bump();
                Ok(())
            }
            Tok::Eof => Ok(()),
            other => err(
                self.pos(),
                format!("expected end of statement, found {other}"),
            ),
        }
    }

    fn document(&mut self) -> Result<Document, ParseError> {
        let mut statements = Vec::new();
        loop {
            while matches!(self.peek(), Tok::Newline | Tok::Sym(";")) {
                self.bump();
            }
            if *self.peek() == Tok::Eof {
                break;
            }
            statements.push(self.statement()?);
            self.end_of_statement()?;
        }
        Ok(Document { statements })
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let (word, pos) = self.ident()?;
        Ok(match word.as_str() {
            "degree" => {
                self.expect_sym("=")?;
                Statement::Degree(self.small()?)
            }
            "seed" => {
                self.expect_sym("=")?;
                Statement::Seed(self.small()?)
            }
            "convention" => {
                self.expect_sym("=")?;
                let p = self.pos();
                let text = match self.bump() {
                    (Tok::Num(n), _) if n == BigRational::from_integer(2.into()) => {
                        self.expect_word("i")?;
                        "2i".to_string()
                    }
                    (Tok::Ident(s), _) => s,
                    (t, _) => return err(p, format!("expected 2i or i, found {t}")),
                };
                Statement::Convention(text.parse().or_else(|e: String| err(p, e))?)
            }
            "classify" => {
                let (name, pos) = self.name()?;
                Statement::Classify { name, pos }
            }
            "check-map" => {
                let (map, _) = self.name()?;
                self.expect_sym(":")?;
                let (source, _) = self.name()?;
                self.expect_sym("->")?;
                let (target, _) = self.name()?;
                Statement::CheckMap {
                    map,
                    source,
                    target,
                    pos,
                }
            }
            "prolong" => {
                let (a, _) = self.name()?;
                self.expect_sym(",")?;
                self.expect_word("b")?;
                self.expect_sym("=")?;
                let b = self.bracketed()?;
                self.expect_sym(",")?;
                self.expect_word("alpha")?;
                self.expect_sym("=")?;
                self.expect_sym("(")?;
                let mut alpha = vec![self.small()?];
                while self.is_sym(",") {
                    self.bump();
                    alpha.push(self.small()?);
                }
                self.expect_sym(")")?;
                Statement::Prolong { a, b, alpha, pos }
            }
            "verify" => {
                let (s, p) = self.ident()?;
                match Suite::parse(&s) {
                    Some(suite) => Statement::Verify(suite),
                    None => return err(p, format!("unknown suite `{s}`")),
                }
            }
            "examples" => Statement::Examples,
            _ => {
                if KEYWORDS.contains(&word.as_str()) || is_variable(&word) {
                    return err(
                        pos,
                        format!("`{word}` is reserved and cannot name an object"),
                    );
                }
                if !self.is_sym("=") {
                    return err(pos, format!("unknown statement `{word}`"));
                }
                self.bump();
                let def = self.definition()?;
                Statement::Let {
                    name: word,
                    pos,
                    def,
                }
            }
        })
    }

    fn bracketed(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect_sym("[")?;
        let mut out = vec![self.expr()?];
        while self.is_sym(",") {
            self.bump();
            out.push(self.expr()?);
        }
        self.expect_sym("]")?;
        Ok(out)
    }

    fn definition(&mut self) -> Result<Definition, ParseError> {
        let head = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return Ok(Definition::Series(self.expr()?)),
        };
        let next_is_paren = matches!(self.toks.get(self.at + 1), Some((Tok::Sym("("), _)));
        if !next_is_paren {
            return Ok(Definition::Series(self.expr()?));
        }
        let def = match head.as_str() {
            "hypersurface" => {
                self.bump();
                self.expect_sym("(")?;
                let (which, p) = self.ident()?;
                self.expect_sym("=")?;
                let e = self.expr()?;
                self.expect_sym(")")?;
                match which.as_str() {
                    "Q" => Definition::HypersurfaceQ(e),
                    "phi" => Definition::HypersurfacePhi(e),
                    _ => return err(p, "expected `Q` or `phi`"),
                }
            }
            "heisenberg" | "exp_model" => {
                self.bump();
                self.expect_sym("(")?;
                let k = self.small()?;
                self.expect_sym(")")?;
                if head == "heisenberg" {
                    Definition::Heisenberg(k)
                } else {
                    Definition::ExpModel(k)
                }
            }
            "blowup" => {
                self.bump();
                self.expect_sym("(")?;
                let b = self.small()?;
                self.expect_sym(",")?;
                let c = self.small()?;
                self.expect_sym(")")?;
                Definition::Blowup(b, c)
            }
            "remark" => {
                self.bump();
                self.expect_sym("(")?;
                self.expect_sym(")")?;
                Definition::Remark
            }
            "m_psi" => {
                self.bump();
                self.expect_sym("(")?;
                let mut comps = vec![self.expr()?];
                while self.is_sym(",") {
                    self.bump();
                    comps.push(self.expr()?);
                }
                self.expect_sym(")")?;
                Definition::MPsi(comps)
            }
            "map" => {
                self.bump();
                self.expect_sym("(")?;
                self.expect_word("F")?;
                self.expect_sym("=")?;
                let f = if self.is_sym("[") {
                    self.bracketed()?
                } else {
                    vec![self.expr()?]
                };
                self.expect_sym(",")?;
                self.expect_word("G")?;
                self.expect_sym("=")?;
                let g = self.expr()?;
                self.expect_sym(")")?;
                Definition::Map { f, g }
            }
            _ => Definition::Series(self.expr()?),
        };
        Ok(def)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.is_sym("+") {
                self.bump();
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.is_sym("-") {
                self.bump();
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.is_sym("*") {
                self.bump();
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.is_sym("/") {
                self.bump();
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.is_sym("-") {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.primary()?;
        if self.is_sym("^") {
            self.bump();
            let k = self.small()?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    /// A number, folding `p / q` of two literals into one rational literal.
    fn literal(&mut self) -> Result<BigRational, ParseError> {
        let p = self.pos();
        let n = match self.bump() {
            (Tok::Num(n), _) => n,
            (t, _) => return err(p, format!("expected a number, found {t}")),
        };
        if self.is_sym("/") && matches!(self.toks.get(self.at + 1), Some((Tok::Num(_), _))) {
            self.bump();
            let q = self.pos();
            let Tok::Num(d) = self.bump().0 else {
                unreachable!()
            };
            if d.is_zero() {
                return err(q, "division by zero");
            }
            return Ok(n / d);
        }
        Ok(n)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(_) => Ok(Expr::Num(self.literal()?)),
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Ident(s) => {
                self.bump();
                match s.as_str() {
                    "i" => Ok(Expr::I),
                    "exp" => {
                        self.expect_sym("(")?;
                        let e = self.expr()?;
                        self.expect_sym(")")?;
                        Ok(Expr::Exp(Box::new(e)))
                    }
                    "sqrt" => {
                        self.expect_sym("(")?;
                        let v = self.literal()?;
                        self.expect_sym(")")?;
                        match rational_sqrt(&v) {
                            Some(r) => Ok(Expr::Num(r)),
                            None => err(pos, format!("sqrt({v}) is not a Gaussian rational")),
                        }
                    }
                    "pi" | "e" | "sin" | "cos" | "log" => {
                        err(pos, format!("`{s}` does not denote a Gaussian rational"))
                    }
                    _ => Ok(Expr::Var(s, pos)),
                }
            }
            other => err(pos, format!("expected an expression, found {other}")),
        }
    }
}

fn rational_sqrt(v: &BigRational) -> Option<BigRational> {
    if v.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(BigRational::new(root(v.numer())?, root(v.denom())?))
}

pub fn parse(src: &str) -> Result<Document, ParseError> {
    let toks = lex(src)?;
    Parser { toks, at: 0 }.document()
}

/// Parse a lone expression, for tests and tooling.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return err(p.pos(), format!("unexpected {}", p.peek()));
    }
    Ok(e)
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(..) => 4,
        _ => 5,
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8, force: bool) -> fmt::Result {
    if force || prec(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(n) => {
                if n.is_integer() {
                    write!(f, "{}", n.numer())
                } else {
                    write!(f, "{}/{}", n.numer(), n.denom())
                }
            }
            Expr::I => f.write_str("i"),
            Expr::Var(s, _) => f.write_str(s),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_child(f, a, 3, false)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                write_child(f, a, 1, false)?;
                f.write_str(if matches!(self, Expr::Add(..)) {
                    " + "
                } else {
                    " - "
                })?;
                write_child(f, b, 2, false)
            }
            Expr::Mul(a, b) => {
                write_child(f, a, 2, false)?;
                f.write_str("*")?;
                write_child(f, b, 3, false)
            }
            Expr::Div(a, b) => {
                write_child(f, a, 2, false)?;
                f.write_str("/")?;
                // a literal right operand would fold into the left literal
                write_child(f, b, 3, matches!(**b, Expr::Num(_)))
            }
            Expr::Pow(a, k) => {
                write_child(f, a, 5, false)?;
                write!(f, "^{k}")
            }
            Expr::Exp(a) => write!(f, "exp({a})"),
        }
    }
}

fn join(es: &[Expr]) -> String {
    es.iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for Definition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Definition::Series(e) => write!(f, "{e}"),
            Definition::HypersurfaceQ(e) => write!(f, "hypersurface(Q = {e})"),
            Definition::HypersurfacePhi(e) => write!(f, "hypersurface(phi = {e})"),
            Definition::Heisenberg(n) => write!(f, "heisenberg({n})"),
            Definition::MPsi(es) => write!(f, "m_psi({})", join(es)),
            Definition::Blowup(b, c) => write!(f, "blowup({b}, {c})"),
            Definition::ExpModel(k) => write!(f, "exp_model({k})"),
            Definition::Remark => f.write_str("remark()"),
            Definition::Map { f: fs, g } => {
                if fs.len() == 1 {
                    write!(f, "map(F = {}, G = {g})", fs[0])
                } else {
                    write!(f, "map(F = [{}], G = {g})", join(fs))
                }
            }
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Degree(d) => write!(f, "degree = {d}"),
            Statement::Convention(c) => write!(f, "convention = {c}"),
            Statement::Seed(s) => write!(f, "seed = {s}"),
            Statement::Let { name, def, .. } => write!(f, "{name} = {def}"),
            Statement::Classify { name, .. } => write!(f, "classify {name}"),
            Statement::CheckMap {
                map,
                source,
                target,
                ..
            } => write!(f, "check-map {map} : {source} -> {target}"),
            Statement::Prolong { a, b, alpha, .. } => {
                let alpha = alpha
                    .iter()
                    .map(|k| k.to_string())
                    .collect::<Vec<_>>()
                    .join(", ");
                write!(f, "prolong {a}, b = [{}], alpha = ({alpha})", join(b))
            }
            Statement::Verify(s) => write!(f, "verify {}", s.as_str()),
            Statement::Examples => f.write_str("examples"),
        }
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
