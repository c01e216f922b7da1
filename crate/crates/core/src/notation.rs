//! Brace notation for games: parsing, evaluation and canonical printing.
//!
//! ```text
//! expr := term ('+' term)*
//! term := '-' term | atom
//! atom := '0' | '1' | '*' | '{' list '|' list '}' | '(' expr ')'
//! list := empty | expr (',' expr)*
//! ```
//!
//! Whitespace is ignored and `+` associates to the left. There is no binary
//! minus. `-1` is unary minus applied to `1`, which evaluates to the named
//! game `-1 = (∅, {0})`.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::game::{GameError, GameId, GameStore};

/// Parenthesis/brace nesting accepted by [`parse`].
pub const MAX_NESTING: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Named {
    Zero,
    One,
    NegOne,
    Star,
}

impl Named {
    pub fn symbol(self) -> &'static str {
        match self {
            Named::Zero => "0",
            Named::One => "1",
            Named::NegOne => "-1",
            Named::Star => "*",
        }
    }

    pub fn intern(self, store: &mut GameStore) -> GameId {
        match self {
            Named::Zero => store.zero(),
            Named::One => store.one(),
            Named::NegOne => store.neg_one(),
            Named::Star => store.star(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(Named),
    Braces(Vec<Expr>, Vec<Expr>),
    Neg(Box<Expr>),
    Sum(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn negation(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    pub fn sum(a: Expr, b: Expr) -> Expr {
        Expr::Sum(Box::new(a), Box::new(b))
    }
}

// Long `+` chains nest as deeply as they are long; unlink children onto a
// heap stack so dropping never recurses.
impl Drop for Expr {
    fn drop(&mut self) {
        fn detach(e: &mut Expr, stack: &mut Vec<Expr>) {
            let leaf = || Expr::Const(Named::Zero);
            match e {
                Expr::Const(_) => {}
                Expr::Neg(x) => stack.push(std::mem::replace(&mut **x, leaf())),
                Expr::Sum(a, b) => {
                    stack.push(std::mem::replace(&mut **a, leaf()));
                    stack.push(std::mem::replace(&mut **b, leaf()));
                }
                Expr::Braces(l, r) => {
                    stack.append(l);
                    stack.append(r);
                }
            }
        }
        let mut stack = Vec::new();
        detach(self, &mut stack);
        while let Some(mut e) = stack.pop() {
            detach(&mut e, &mut stack);
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, xs: &[Expr]) -> fmt::Result {
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            Ok(())
        }
        match self {
            Expr::Const(n) => f.write_str(n.symbol()),
            Expr::Braces(l, r) => {
                f.write_str("{")?;
                list(f, l)?;
                f.write_str("|")?;
                list(f, r)?;
                f.write_str("}")
            }
            Expr::Neg(e) => match **e {
                Expr::Sum(..) => write!(f, "-({e})"),
                _ => write!(f, "-{e}"),
            },
            Expr::Sum(a, b) => {
                write!(f, "{a}+")?;
                match **b {
                    Expr::Sum(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    EmptyInput,
    UnexpectedChar(char),
    UnexpectedToken(&'static str),
    UnexpectedEnd,
    Unclosed { open: char, opened_at: usize },
    UnmatchedClose(char),
    Subtraction,
    TooDeep,
}

/// Syntax error with a 1-based character position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
    pub expected: Vec<&'static str>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at position {}: ", self.position)?;
        match &self.kind {
            ParseErrorKind::EmptyInput => f.write_str("empty input")?,
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}")?,
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected '{t}'")?,
            ParseErrorKind::UnexpectedEnd => f.write_str("unexpected end of input")?,
            ParseErrorKind::Unclosed { open, opened_at } => {
                write!(f, "unbalanced '{open}' opened at position {opened_at}")?
            }
            ParseErrorKind::UnmatchedClose(c) => write!(f, "unbalanced '{c}'")?,
            ParseErrorKind::Subtraction => {
                f.write_str("subtraction is not defined; write +-")?;
                return Ok(());
            }
            ParseErrorKind::TooDeep => {
                write!(f, "nesting deeper than {MAX_NESTING}")?;
                return Ok(());
            }
        }
        if !self.expected.is_empty() {
            let quoted: Vec<String> = self.expected.iter().map(|t| format!("'{t}'")).collect();
            write!(f, "; expected one of {}", quoted.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Zero,
    One,
    Star,
    Minus,
    Plus,
    LBrace,
    RBrace,
    Bar,
    Comma,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn text(self) -> &'static str {
        match self {
            Tok::Zero => "0",
            Tok::One => "1",
            Tok::Star => "*",
            Tok::Minus => "-",
            Tok::Plus => "+",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Bar => "|",
            Tok::Comma => ",",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::End => "end of input",
        }
    }
}

const TERM_START: &[&str] = &["0", "1", "*", "-", "{", "("];

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut toks = Vec::new();
    let mut end = 1;
    for (i, c) in text.chars().enumerate() {
        let pos = i + 1;
        end = pos + 1;
        let tok = match c {
            '0' => Tok::Zero,
            '1' => Tok::One,
            '*' => Tok::Star,
            '-' => Tok::Minus,
            '+' => Tok::Plus,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '|' => Tok::Bar,
            ',' => Tok::Comma,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_whitespace() => continue,
            c => {
                return Err(ParseError {
                    position: pos,
                    kind: ParseErrorKind::UnexpectedChar(c),
                    expected: Vec::new(),
                })
            }
        };
        toks.push((tok, pos));
    }
    toks.push((Tok::End, end));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    // innermost last: (closing token, opening char, position)
    open: Vec<(Tok, char, usize)>,
}

impl Parser {
    fn peek(&self) -> (Tok, usize) {
        self.toks[self.at]
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at];
        if t.0 != Tok::End {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        let (tok, position) = self.peek();
        let kind = match tok {
            Tok::End => match self.open.last() {
                Some(&(_, open, opened_at)) => ParseErrorKind::Unclosed { open, opened_at },
                None => ParseErrorKind::UnexpectedEnd,
            },
            Tok::Minus => ParseErrorKind::Subtraction,
            Tok::RBrace | Tok::RParen if !self.open.iter().any(|o| o.0 == tok) => {
                ParseErrorKind::UnmatchedClose(tok.text().chars().next().unwrap_or(' '))
            }
            t => ParseErrorKind::UnexpectedToken(t.text()),
        };
        ParseError {
            position,
            kind,
            expected: expected.to_vec(),
        }
    }

    fn enter(&mut self, close: Tok, open: char, pos: usize) -> Result<(), ParseError> {
        if self.open.len() >= MAX_NESTING {
            return Err(ParseError {
                position: pos,
                kind: ParseErrorKind::TooDeep,
                expected: Vec::new(),
            });
        }
        self.open.push((close, open, pos));
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        while self.peek().0 == Tok::Plus {
            self.bump();
            let rhs = self.term()?;
            acc = Expr::sum(acc, rhs);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut negations = 0usize;
        while self.peek().0 == Tok::Minus {
            self.bump();
            negations += 1;
        }
        let mut e = self.atom()?;
        for _ in 0..negations {
            e = Expr::negation(e);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (tok, pos) = self.peek();
        let e = match tok {
            Tok::Zero => Expr::Const(Named::Zero),
            Tok::One => Expr::Const(Named::One),
            Tok::Star => Expr::Const(Named::Star),
            Tok::LParen => {
                self.bump();
                self.enter(Tok::RParen, '(', pos)?;
                let inner = self.expr()?;
                self.close(Tok::RParen, &["+", ")"])?;
                return Ok(inner);
            }
            Tok::LBrace => {
                self.bump();
                self.enter(Tok::RBrace, '{', pos)?;
                let left = self.list(Tok::Bar)?;
                self.close_keep(Tok::Bar, &["+", ",", "|"])?;
                let right = self.list(Tok::RBrace)?;
                self.close(Tok::RBrace, &["+", ",", "}"])?;
                return Ok(Expr::Braces(left, right));
            }
            Tok::End if self.at == 0 => {
                return Err(ParseError {
                    position: pos,
                    kind: ParseErrorKind::EmptyInput,
                    expected: Vec::new(),
                })
            }
            _ => return Err(self.error(TERM_START)),
        };
        self.bump();
        Ok(e)
    }

    fn list(&mut self, terminator: Tok) -> Result<Vec<Expr>, ParseError> {
        let mut items = Vec::new();
        if self.peek().0 == terminator {
            return Ok(items);
        }
        if !matches!(
            self.peek().0,
            Tok::Zero | Tok::One | Tok::Star | Tok::Minus | Tok::LBrace | Tok::LParen
        ) {
            let mut expected = TERM_START.to_vec();
            expected.push(terminator.text());
            return Err(self.error(&expected));
        }
        items.push(self.expr()?);
        while self.peek().0 == Tok::Comma {
            self.bump();
            items.push(self.expr()?);
        }
        Ok(items)
    }

    // Consumes `tok`, which separates the two halves of the innermost brace.
    fn close_keep(&mut self, tok: Tok, expected: &[&'static str]) -> Result<(), ParseError> {
        if self.peek().0 == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn close(&mut self, tok: Tok, expected: &[&'static str]) -> Result<(), ParseError> {
        self.close_keep(tok, expected)?;
        self.open.pop();
        Ok(())
    }
}

/// Parses a game expression.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        open: Vec::new(),
    };
    let e = p.expr()?;
    match p.peek().0 {
        Tok::End => Ok(e),
        _ => Err(p.error(&["+", "end of input"])),
    }
}

enum Task<'a> {
    Visit(&'a Expr),
    Neg,
    Sum,
    Braces(usize, usize),
}

/// Folds an expression into the store through intern, negate and sum.
pub fn evaluate(store: &mut GameStore, expr: &Expr) -> Result<GameId, GameError> {
    let mut tasks = vec![Task::Visit(expr)];
    let mut values: Vec<GameId> = Vec::new();
    while let Some(task) = tasks.pop() {
        match task {
            Task::Visit(Expr::Const(n)) => values.push(n.intern(store)),
            Task::Visit(Expr::Neg(e)) => {
                tasks.push(Task::Neg);
                tasks.push(Task::Visit(e));
            }
            Task::Visit(Expr::Sum(a, b)) => {
                tasks.push(Task::Sum);
                tasks.push(Task::Visit(b));
                tasks.push(Task::Visit(a));
            }
            Task::Visit(Expr::Braces(l, r)) => {
                tasks.push(Task::Braces(l.len(), r.len()));
                tasks.extend(l.iter().chain(r).rev().map(Task::Visit));
            }
            Task::Neg => {
                let g = values.pop().expect("operand evaluated");
                values.push(store.negate(g)?);
            }
            Task::Sum => {
                let h = values.pop().expect("right operand evaluated");
                let g = values.pop().expect("left operand evaluated");
                values.push(store.sum(g, h)?);
            }
            Task::Braces(nl, nr) => {
                let opts = values.split_off(values.len() - nl - nr);
                values.push(store.intern(&opts[..nl], &opts[nl..])?);
            }
        }
    }
    Ok(values.pop().expect("expression produces one value"))
}

/// Parses and evaluates in one step.
pub fn eval_str(store: &mut GameStore, text: &str) -> Result<GameId, NotationError> {
    let expr = parse(text)?;
    Ok(evaluate(store, &expr)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotationError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Game(#[from] GameError),
}

fn named(store: &GameStore, g: GameId) -> Option<Named> {
    let (l, r) = store.options(g).ok()?;
    let z = GameId::ZERO;
    match (l, r) {
        ([], []) => Some(Named::Zero),
        ([a], []) if *a == z => Some(Named::One),
        ([], [b]) if *b == z => Some(Named::NegOne),
        ([a], [b]) if *a == z && *b == z => Some(Named::Star),
        _ => None,
    }
}

#[derive(Clone)]
struct Printed {
    expanded: Rc<str>,
    folded: Rc<str>,
}

/// Canonical printer with a per-store cache.
///
/// Options are ordered by their fully expanded form, shorter first and then
/// bytewise, so the output never depends on handle values. The cache is
/// keyed by handle: use one printer per store.
#[derive(Default)]
pub struct Printer {
    cache: HashMap<GameId, Printed>,
}

impl Printer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn print(
        &mut self,
        store: &GameStore,
        g: GameId,
        fold_constants: bool,
    ) -> Result<String, GameError> {
        let p = self.printed(store, g)?;
        Ok(if fold_constants { p.folded } else { p.expanded }.to_string())
    }

    fn printed(&mut self, store: &GameStore, g: GameId) -> Result<Printed, GameError> {
        store.options(g)?;
        let mut stack = vec![g];
        while let Some(&top) = stack.last() {
            if self.cache.contains_key(&top) {
                stack.pop();
                continue;
            }
            let (l, r) = store.options(top)?;
            let before = stack.len();
            stack.extend(l.iter().chain(r).filter(|x| !self.cache.contains_key(x)));
            if stack.len() > before {
                continue;
            }
            let side = |ids: &[GameId]| {
                let mut xs: Vec<&Printed> = ids.iter().map(|x| &self.cache[x]).collect();
                xs.sort_by(|a, b| {
                    (a.expanded.len(), &*a.expanded).cmp(&(b.expanded.len(), &*b.expanded))
                });
                let expanded: Vec<&str> = xs.iter().map(|p| &*p.expanded).collect();
                let folded: Vec<&str> = xs.iter().map(|p| &*p.folded).collect();
                (expanded.join(","), folded.join(","))
            };
            let (le, lf) = side(l);
            let (re, rf) = side(r);
            let expanded: Rc<str> = format!("{{{le}|{re}}}").into();
            let folded: Rc<str> = match named(store, top) {
                Some(n) => n.symbol().into(),
                None => format!("{{{lf}|{rf}}}").into(),
            };
            self.cache.insert(top, Printed { expanded, folded });
            stack.pop();
        }
        Ok(self.cache[&g].clone())
    }
}

/// Canonical text for `g`; see [`Printer`].
pub fn print_game(store: &GameStore, g: GameId, fold_constants: bool) -> Result<String, GameError> {
    Printer::new().print(store, g, fold_constants)
}

/// JSON array of printed games, in the given order.
pub fn listing_json(
    store: &GameStore,
    ids: &[GameId],
    fold_constants: bool,
) -> Result<String, GameError> {
    let mut printer = Printer::new();
    let texts = ids
        .iter()
        .map(|&g| printer.print(store, g, fold_constants))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(serde_json::to_string(&texts).expect("strings serialize"))
}
