//! Boolean algebra of subsets of a finite universe of actions, and an
//! expression language over subject variables evaluated in that algebra.
//!
//! An [`ActionSet`] is stored as a bitmask over the action order of its
//! [`UniversalSet`]; bit `i` set means action `i` is a member. Expressions
//! ([`Expr`]) are never simplified symbolically: all semantics flow through
//! [`eval`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported universe.
pub const MAX_ACTIONS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("universe must contain between 1 and {MAX_ACTIONS} actions, got {0}")]
    UniverseSize(usize),
    #[error("invalid action name {0:?}")]
    InvalidAction(String),
    #[error("duplicate action name {0:?}")]
    DuplicateAction(String),
    #[error("unknown action {0:?}")]
    UnknownAction(String),
    #[error("operands belong to incompatible universes")]
    UniverseMismatch,
    #[error("no value assigned to subject {0:?}")]
    UnboundVariable(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub type Result<T> = std::result::Result<T, AlgebraError>;

/// The ordered list of elementary actions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniversalSet {
    actions: Arc<[String]>,
}

impl UniversalSet {
    pub fn new<I, S>(actions: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let actions: Vec<String> = actions.into_iter().map(Into::into).collect();
        if actions.is_empty() || actions.len() > MAX_ACTIONS {
            return Err(AlgebraError::UniverseSize(actions.len()));
        }
        let mut seen = BTreeSet::new();
        for name in &actions {
            if !is_valid_action_name(name) {
                return Err(AlgebraError::InvalidAction(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(AlgebraError::DuplicateAction(name.clone()));
            }
        }
        Ok(Self {
            actions: actions.into(),
        })
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of elements of the induced algebra, `2^n`.
    pub fn cardinality(&self) -> usize {
        1usize << self.len()
    }

    fn full_mask(&self) -> u32 {
        ((1u64 << self.len()) - 1) as u32
    }

    fn same(&self, other: &UniversalSet) -> bool {
        Arc::ptr_eq(&self.actions, &other.actions) || self.actions == other.actions
    }

    pub fn empty(&self) -> ActionSet {
        ActionSet {
            universe: self.clone(),
            bits: 0,
        }
    }

    pub fn full(&self) -> ActionSet {
        ActionSet {
            universe: self.clone(),
            bits: self.full_mask(),
        }
    }

    pub fn index_of(&self, action: &str) -> Option<usize> {
        self.actions.iter().position(|a| a == action)
    }

    /// Builds a set from action names.
    pub fn set<I, S>(&self, members: I) -> Result<ActionSet>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut bits = 0u32;
        for m in members {
            let m = m.as_ref();
            let idx = self
                .index_of(m)
                .ok_or_else(|| AlgebraError::UnknownAction(m.to_string()))?;
            bits |= 1 << idx;
        }
        Ok(ActionSet {
            universe: self.clone(),
            bits,
        })
    }

    /// The set whose membership bitmask is `bits` (bit `i` = action `i`).
    pub fn from_bits(&self, bits: u32) -> Result<ActionSet> {
        if bits & !self.full_mask() != 0 {
            return Err(AlgebraError::UniverseMismatch);
        }
        Ok(ActionSet {
            universe: self.clone(),
            bits,
        })
    }

    /// Parses `1`, `0`, `{}` or `{alpha,beta}`.
    pub fn parse_set(&self, text: &str) -> Result<ActionSet> {
        let mut p = Parser::new(text, self);
        p.skip_ws();
        let set = p.set_literal()?;
        p.skip_ws();
        if !p.at_end() {
            return Err(p.error("trailing input after set literal"));
        }
        Ok(set)
    }
}

impl fmt::Debug for UniversalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.actions.iter()).finish()
    }
}

fn is_valid_action_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '-')
}

/// An element of the Boolean algebra of a [`UniversalSet`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ActionSet {
    universe: UniversalSet,
    bits: u32,
}

impl ActionSet {
    pub fn universe(&self) -> &UniversalSet {
        &self.universe
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == self.universe.full_mask()
    }

    pub fn contains(&self, action: &str) -> bool {
        self.universe
            .index_of(action)
            .is_some_and(|i| self.bits & (1 << i) != 0)
    }

    pub fn members(&self) -> Vec<&str> {
        self.universe
            .actions()
            .iter()
            .enumerate()
            .filter(|(i, _)| self.bits & (1 << i) != 0)
            .map(|(_, a)| a.as_str())
            .collect()
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &ActionSet) -> Result<bool> {
        check_same(self, other)?;
        Ok(self.bits & !other.bits == 0)
    }

    fn with_bits(&self, bits: u32) -> ActionSet {
        ActionSet {
            universe: self.universe.clone(),
            bits,
        }
    }
}

impl fmt::Display for ActionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_full() {
            f.write_str("1")
        } else if self.is_empty() {
            f.write_str("0")
        } else {
            write!(f, "{{{}}}", self.members().join(","))
        }
    }
}

impl fmt::Debug for ActionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn check_same(a: &ActionSet, b: &ActionSet) -> Result<()> {
    if a.universe.same(&b.universe) {
        Ok(())
    } else {
        Err(AlgebraError::UniverseMismatch)
    }
}

/// Intersection. Alliance is read as meet.
pub fn meet(a: &ActionSet, b: &ActionSet) -> Result<ActionSet> {
    check_same(a, b)?;
    Ok(a.with_bits(a.bits & b.bits))
}

/// Union. Conflict is read as join.
pub fn join(a: &ActionSet, b: &ActionSet) -> Result<ActionSet> {
    check_same(a, b)?;
    Ok(a.with_bits(a.bits | b.bits))
}

pub fn complement(a: &ActionSet) -> ActionSet {
    a.with_bits(!a.bits & a.universe.full_mask())
}

/// `P^W = P + ~W`, the implication `W → P`.
pub fn exp_op(p: &ActionSet, w: &ActionSet) -> Result<ActionSet> {
    join(p, &complement(w))
}

/// All `2^n` elements, ordered by binary counting over the action order
/// (action `i` is bit `i`).
pub fn all_elements(universe: &UniversalSet) -> Vec<ActionSet> {
    (0..universe.cardinality() as u32)
        .map(|bits| ActionSet {
            universe: universe.clone(),
            bits,
        })
        .collect()
}

/// Values of subject variables.
pub type Assignment = BTreeMap<String, ActionSet>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(String),
    Const(ActionSet),
    Meet(Box<Expr>, Box<Expr>),
    Join(Box<Expr>, Box<Expr>),
    Complement(Box<Expr>),
}

impl Expr {
    pub fn var(id: impl Into<String>) -> Expr {
        Expr::Var(id.into())
    }

    pub fn meet(a: Expr, b: Expr) -> Expr {
        Expr::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: Expr, b: Expr) -> Expr {
        Expr::Join(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Expr) -> Expr {
        Expr::Complement(Box::new(a))
    }

    /// `P + ~W`.
    pub fn exp(p: Expr, w: Expr) -> Expr {
        Expr::join(p, Expr::not(w))
    }

    /// Left-nested meet of all items; `None` when empty.
    pub fn meet_all(items: impl IntoIterator<Item = Expr>) -> Option<Expr> {
        items.into_iter().reduce(Expr::meet)
    }

    pub fn join_all(items: impl IntoIterator<Item = Expr>) -> Option<Expr> {
        items.into_iter().reduce(Expr::join)
    }

    /// Subject variables in lexicographic order.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Const(_) => {}
            Expr::Meet(a, b) | Expr::Join(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Complement(a) => a.collect_vars(out),
        }
    }

    pub fn is_complement_free(&self) -> bool {
        match self {
            Expr::Var(_) | Expr::Const(_) => true,
            Expr::Meet(a, b) | Expr::Join(a, b) => a.is_complement_free() && b.is_complement_free(),
            Expr::Complement(_) => false,
        }
    }

    /// Parses the textual syntax: juxtaposition or `*` for meet, `+` for
    /// join, `~` for complement, parentheses, set literals `{a,b}`, `1`, `0`.
    ///
    /// A subject identifier is one ASCII letter optionally followed by
    /// digits or underscores, so `ab` reads as `a*b` and `x1x2` as `x1*x2`.
    pub fn parse(text: &str, universe: &UniversalSet) -> Result<Expr> {
        let mut p = Parser::new(text, universe);
        let e = p.expr()?;
        p.skip_ws();
        if !p.at_end() {
            return Err(p.error("unexpected input"));
        }
        Ok(e)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Join(..) => 0,
            Expr::Meet(..) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(v) => f.write_str(v),
            Expr::Const(s) => write!(f, "{s}"),
            Expr::Join(a, b) => write!(f, "{a} + {b}"),
            Expr::Meet(a, b) => {
                let left = if a.precedence() < 1 {
                    format!("({a})")
                } else {
                    a.to_string()
                };
                let right = if b.precedence() < 2 {
                    format!("({b})")
                } else {
                    b.to_string()
                };
                // juxtaposition would glue an identifier to a following digit
                if right.starts_with(|c: char| c.is_ascii_digit()) {
                    write!(f, "{left}*{right}")
                } else {
                    write!(f, "{left}{right}")
                }
            }
            Expr::Complement(a) => {
                if a.precedence() < 2 {
                    write!(f, "~({a})")
                } else {
                    write!(f, "~{a}")
                }
            }
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

/// Bottom-up evaluation: meet is intersection, join is union, complement
/// is relative to the universe.
pub fn eval(e: &Expr, assignment: &Assignment) -> Result<ActionSet> {
    match e {
        Expr::Var(v) => assignment
            .get(v)
            .cloned()
            .ok_or_else(|| AlgebraError::UnboundVariable(v.clone())),
        Expr::Const(s) => Ok(s.clone()),
        Expr::Meet(a, b) => meet(&eval(a, assignment)?, &eval(b, assignment)?),
        Expr::Join(a, b) => join(&eval(a, assignment)?, &eval(b, assignment)?),
        Expr::Complement(a) => Ok(complement(&eval(a, assignment)?)),
    }
}

/// Every assignment of algebra elements to `subjects`, in odometer order
/// with the last subject varying fastest.
pub fn assignments(subjects: &[String], universe: &UniversalSet) -> Vec<Assignment> {
    let elements = all_elements(universe);
    let mut out = vec![Assignment::new()];
    for s in subjects {
        out = out
            .into_iter()
            .flat_map(|base| {
                elements.iter().map(move |el| {
                    let mut next = base.clone();
                    next.insert(s.clone(), el.clone());
                    next
                })
            })
            .collect();
    }
    out
}

/// True iff `e1` and `e2` evaluate equally on the whole `(2^n)^k` grid.
pub fn equivalent(e1: &Expr, e2: &Expr, subjects: &[String], universe: &UniversalSet) -> Result<bool> {
    for a in assignments(subjects, universe) {
        if eval(e1, &a)? != eval(e2, &a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    universe: &'a UniversalSet,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, universe: &'a UniversalSet) -> Self {
        Self { src, pos: 0, universe }
    }

    fn error(&self, message: &str) -> AlgebraError {
        AlgebraError::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('+') {
                self.bump();
                let rhs = self.term()?;
                lhs = Expr::join(lhs, rhs);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.bump();
                    let rhs = self.factor()?;
                    lhs = Expr::meet(lhs, rhs);
                }
                Some(c) if c == '(' || c == '{' || c == '~' || c.is_ascii_alphanumeric() => {
                    let rhs = self.factor()?;
                    lhs = Expr::meet(lhs, rhs);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        self.skip_ws();
        match self.peek() {
            Some('~') => {
                self.bump();
                Ok(Expr::not(self.factor()?))
            }
            Some('(') => {
                self.bump();
                let e = self.expr()?;
                self.skip_ws();
                if self.bump() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some('{') | Some('0') | Some('1') => Ok(Expr::Const(self.set_literal()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                self.bump();
                while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '_') {
                    self.bump();
                }
                Ok(Expr::Var(self.src[start..self.pos].to_string()))
            }
            Some(_) => Err(self.error("expected a variable, set literal or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn set_literal(&mut self) -> Result<ActionSet> {
        match self.bump() {
            Some('0') => Ok(self.universe.empty()),
            Some('1') => Ok(self.universe.full()),
            Some('{') => {
                let mut names = Vec::new();
                loop {
                    self.skip_ws();
                    if self.peek() == Some('}') {
                        self.bump();
                        break;
                    }
                    let start = self.pos;
                    while self
                        .peek()
                        .is_some_and(|c| c.is_alphanumeric() || c == '_' || c == '-')
                    {
                        self.bump();
                    }
                    if start == self.pos {
                        return Err(self.error("expected an action name"));
                    }
                    names.push(&self.src[start..self.pos]);
                    self.skip_ws();
                    match self.bump() {
                        Some(',') => continue,
                        Some('}') => break,
                        _ => return Err(self.error("expected ',' or '}'")),
                    }
                }
                self.universe.set(names)
            }
            _ => Err(self.error("expected a set literal")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> UniversalSet {
        UniversalSet::new(["alpha", "beta"]).unwrap()
    }

    fn s(u: &UniversalSet, t: &str) -> ActionSet {
        u.parse_set(t).unwrap()
    }

    fn assign(u: &UniversalSet, pairs: &[(&str, &str)]) -> Assignment {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), s(u, v)))
            .collect()
    }

    #[test]
    fn meet_examples() {
        let u = ab();
        assert_eq!(meet(&s(&u, "{alpha}"), &s(&u, "{beta}")).unwrap(), u.empty());
        assert_eq!(meet(&u.full(), &s(&u, "{beta}")).unwrap(), s(&u, "{beta}"));
        assert_eq!(meet(&s(&u, "{beta}"), &s(&u, "{beta}")).unwrap(), s(&u, "{beta}"));
    }

    #[test]
    fn join_examples() {
        let u = ab();
        assert_eq!(join(&s(&u, "{alpha}"), &s(&u, "{beta}")).unwrap(), u.full());
        assert_eq!(join(&u.empty(), &s(&u, "{alpha}")).unwrap(), s(&u, "{alpha}"));
        assert_eq!(join(&s(&u, "{beta}"), &s(&u, "{alpha}")).unwrap(), u.full());
    }

    #[test]
    fn mismatched_universes_are_rejected() {
        let u = ab();
        let v = UniversalSet::new(["open"]).unwrap();
        assert_eq!(meet(&u.full(), &v.full()), Err(AlgebraError::UniverseMismatch));
        assert_eq!(join(&u.full(), &v.full()), Err(AlgebraError::UniverseMismatch));
        assert_eq!(exp_op(&u.full(), &v.full()), Err(AlgebraError::UniverseMismatch));
    }

    #[test]
    fn equal_action_lists_are_compatible() {
        let u = ab();
        let v = ab();
        assert_eq!(meet(&u.full(), &v.full()).unwrap(), u.full());
    }

    #[test]
    fn complement_examples() {
        let u = ab();
        assert_eq!(complement(&u.full()), u.empty());
        assert_eq!(complement(&s(&u, "{alpha}")), s(&u, "{beta}"));
        assert_eq!(complement(&u.empty()), u.full());
    }

    #[test]
    fn exp_op_examples() {
        let u = ab();
        for x in all_elements(&u) {
            assert_eq!(exp_op(&x, &u.full()).unwrap(), x);
        }
        let p = meet(&s(&u, "{alpha}"), &s(&u, "{beta}")).unwrap();
        assert_eq!(exp_op(&p, &p).unwrap(), u.full());
        assert_eq!(exp_op(&s(&u, "{alpha}"), &s(&u, "{beta}")).unwrap(), s(&u, "{alpha}"));
    }

    #[test]
    fn eval_examples() {
        let u = ab();
        let e = Expr::parse("ab + c", &u).unwrap();
        let a = assign(&u, &[("a", "{beta}"), ("b", "{beta}"), ("c", "{beta}")]);
        assert_eq!(eval(&e, &a).unwrap(), s(&u, "{beta}"));

        let e = Expr::parse("a + bc", &u).unwrap();
        let a = assign(&u, &[("a", "0"), ("b", "{alpha}"), ("c", "{alpha}")]);
        assert_eq!(eval(&e, &a).unwrap(), s(&u, "{alpha}"));

        let e = Expr::not(Expr::var("a"));
        assert_eq!(eval(&e, &assign(&u, &[("a", "1")])).unwrap(), u.empty());
    }

    #[test]
    fn eval_reports_unbound_subject() {
        let u = ab();
        let e = Expr::parse("a + bc", &u).unwrap();
        let a = assign(&u, &[("a", "0"), ("c", "1")]);
        assert_eq!(eval(&e, &a), Err(AlgebraError::UnboundVariable("b".into())));
    }

    #[test]
    fn all_elements_order() {
        let u = ab();
        let got: Vec<String> = all_elements(&u).iter().map(ToString::to_string).collect();
        assert_eq!(got, ["0", "{alpha}", "{beta}", "1"]);

        let one = UniversalSet::new(["alpha"]).unwrap();
        let got: Vec<String> = all_elements(&one).iter().map(ToString::to_string).collect();
        assert_eq!(got, ["0", "1"]);

        let three = UniversalSet::new(["x", "y", "z"]).unwrap();
        let els = all_elements(&three);
        assert_eq!(els.len(), 8);
        let distinct: BTreeSet<u32> = els.iter().map(ActionSet::bits).collect();
        assert_eq!(distinct.len(), 8);
    }

    #[test]
    fn equivalent_examples() {
        let u = ab();
        let subj = vec!["a".to_string()];
        let a = Expr::var("a");
        assert!(equivalent(&a, &Expr::join(a.clone(), a.clone()), &subj, &u).unwrap());
        assert!(!equivalent(&a, &Expr::not(a.clone()), &subj, &u).unwrap());
    }

    #[test]
    fn universe_validation() {
        assert!(UniversalSet::new(Vec::<String>::new()).is_err());
        assert!(UniversalSet::new(["a", "a"]).is_err());
        assert!(UniversalSet::new([""]).is_err());
        let many: Vec<String> = (0..17).map(|i| format!("x{i}")).collect();
        assert_eq!(UniversalSet::new(many).unwrap_err(), AlgebraError::UniverseSize(17));
        let sixteen: Vec<String> = (0..16).map(|i| format!("x{i}")).collect();
        let u = UniversalSet::new(sixteen).unwrap();
        assert_eq!(u.cardinality(), 65536);
        assert!(u.full().is_full());
        assert_eq!(complement(&u.full()), u.empty());
    }

    #[test]
    fn printing() {
        let u = ab();
        assert_eq!(u.full().to_string(), "1");
        assert_eq!(u.empty().to_string(), "0");
        assert_eq!(s(&u, "{beta,alpha}").to_string(), "1");
        assert_eq!(s(&u, "{ beta }").to_string(), "{beta}");
        assert_eq!(s(&u, "{}").to_string(), "0");

        let e = Expr::parse("ab+c", &u).unwrap();
        assert_eq!(e.to_string(), "ab + c");
        let e = Expr::parse("(a+b)*c", &u).unwrap();
        assert_eq!(e.to_string(), "(a + b)c");
        let e = Expr::parse("a*1 + ~(b+c) + ~a", &u).unwrap();
        assert_eq!(e.to_string(), "a*1 + ~(b + c) + ~a");
    }

    #[test]
    fn parse_errors() {
        let u = ab();
        assert!(matches!(Expr::parse("a +", &u), Err(AlgebraError::Parse { .. })));
        assert!(matches!(Expr::parse("(a", &u), Err(AlgebraError::Parse { .. })));
        assert_eq!(
            Expr::parse("{gamma}", &u),
            Err(AlgebraError::UnknownAction("gamma".into()))
        );
        assert!(u.parse_set("{alpha").is_err());
        assert!(u.parse_set("1 1").is_err());
    }

    #[test]
    fn display_parse_round_trip() {
        let u = ab();
        let vars: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        for text in ["ab+c", "a(b+c)", "~(ab)+{alpha}c", "((a))", "a*0+1b", "~~a", "x1x2 + a"] {
            let e = Expr::parse(text, &u).unwrap();
            let again = Expr::parse(&e.to_string(), &u).unwrap();
            assert_eq!(e, again, "{text} -> {e}");
        }
        let e = Expr::parse("a(b+c)", &u).unwrap();
        let f = Expr::parse("ab+ac", &u).unwrap();
        assert!(equivalent(&e, &f, &vars, &u).unwrap());
    }
}
