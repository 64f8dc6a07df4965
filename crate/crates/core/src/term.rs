//! Terms and equations over {product, meet, join, unit, variables},
//! evaluation on chain algebras, and the families of chains and equations
//! used to classify commutative subvarieties.
//!
//! Concrete syntax: variables `x1 x2 ...`, unit `e`, product `*`, meet `^`,
//! join `v`, parentheses. `*` binds tighter than the lattice operations;
//! `^` and `v` sit at one level and may not be mixed without parentheses;
//! everything associates to the left. Equations are `s <= t` or `s = t`,
//! with `s <= t` stored as the equation `s ^ t = s`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

use crate::algebra::FinOrdMonoid;
use crate::{caps, CapExceeded};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// Variables are numbered from 1.
    Var(u32),
    Unit,
    Prod(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(i: u32) -> Term {
        assert!(i >= 1, "variables are numbered from 1");
        Term::Var(i)
    }

    pub fn prod(a: Term, b: Term) -> Term {
        Term::Prod(Box::new(a), Box::new(b))
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    /// Largest variable index appearing in the term (0 when closed).
    pub fn max_var(&self) -> u32 {
        match self {
            Term::Var(i) => *i,
            Term::Unit => 0,
            Term::Prod(a, b) | Term::Meet(a, b) | Term::Join(a, b) => {
                a.max_var().max(b.max_var())
            }
        }
    }

    /// Order dual: swaps meet and join, keeps the product.
    pub fn dual(&self) -> Term {
        match self {
            Term::Var(i) => Term::Var(*i),
            Term::Unit => Term::Unit,
            Term::Prod(a, b) => Term::prod(a.dual(), b.dual()),
            Term::Meet(a, b) => Term::join(a.dual(), b.dual()),
            Term::Join(a, b) => Term::meet(a.dual(), b.dual()),
        }
    }

    /// Replaces every variable by the term the map assigns to its index.
    pub fn substitute(&self, assign: &impl Fn(u32) -> Term) -> Term {
        match self {
            Term::Var(i) => assign(*i),
            Term::Unit => Term::Unit,
            Term::Prod(a, b) => Term::prod(a.substitute(assign), b.substitute(assign)),
            Term::Meet(a, b) => Term::meet(a.substitute(assign), b.substitute(assign)),
            Term::Join(a, b) => Term::join(a.substitute(assign), b.substitute(assign)),
        }
    }

    /// Removes unit factors from products and collapses meets and joins of
    /// the unit with itself. Enough to compare equation families after a
    /// variables-to-unit substitution.
    pub fn collapse_units(&self) -> Term {
        match self {
            Term::Var(i) => Term::Var(*i),
            Term::Unit => Term::Unit,
            Term::Prod(a, b) => match (a.collapse_units(), b.collapse_units()) {
                (Term::Unit, u) | (u, Term::Unit) => u,
                (u, w) => Term::prod(u, w),
            },
            Term::Meet(a, b) => match (a.collapse_units(), b.collapse_units()) {
                (Term::Unit, Term::Unit) => Term::Unit,
                (u, w) => Term::meet(u, w),
            },
            Term::Join(a, b) => match (a.collapse_units(), b.collapse_units()) {
                (Term::Unit, Term::Unit) => Term::Unit,
                (u, w) => Term::join(u, w),
            },
        }
    }
}

/// Printing context: which operator the node hangs under, and on which
/// side. Right operands of the same operator are parenthesized so the
/// output re-parses to the identical left-associated tree; meets and joins
/// are parenthesized inside products and inside each other.
#[derive(Clone, Copy, PartialEq)]
enum Ctx {
    Top,
    ProdLeft,
    ProdRight,
    MeetLeft,
    MeetRight,
    JoinLeft,
    JoinRight,
}

impl Term {
    fn fmt_in(&self, f: &mut fmt::Formatter<'_>, ctx: Ctx) -> fmt::Result {
        let parens = match self {
            Term::Var(_) | Term::Unit => false,
            Term::Prod(..) => ctx == Ctx::ProdRight,
            Term::Meet(..) => !matches!(ctx, Ctx::Top | Ctx::MeetLeft),
            Term::Join(..) => !matches!(ctx, Ctx::Top | Ctx::JoinLeft),
        };
        if parens {
            f.write_str("(")?;
        }
        match self {
            Term::Var(i) => write!(f, "x{i}")?,
            Term::Unit => f.write_str("e")?,
            Term::Prod(a, b) => {
                a.fmt_in(f, Ctx::ProdLeft)?;
                f.write_str("*")?;
                b.fmt_in(f, Ctx::ProdRight)?;
            }
            Term::Meet(a, b) => {
                a.fmt_in(f, Ctx::MeetLeft)?;
                f.write_str(" ^ ")?;
                b.fmt_in(f, Ctx::MeetRight)?;
            }
            Term::Join(a, b) => {
                a.fmt_in(f, Ctx::JoinLeft)?;
                f.write_str(" v ")?;
                b.fmt_in(f, Ctx::JoinRight)?;
            }
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_in(f, Ctx::Top)
    }
}

/// An equation between two terms. Inequalities are represented by their
/// meet form and printed back as `<=` whenever the shape allows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn eq(lhs: Term, rhs: Term) -> Equation {
        Equation { lhs, rhs }
    }

    /// `s <= t` as the equation `s ^ t = s`.
    pub fn leq(s: Term, t: Term) -> Equation {
        Equation { lhs: Term::meet(s.clone(), t), rhs: s }
    }

    /// Recovers `(s, t)` when the equation has the exact shape `s ^ t = s`.
    pub fn as_leq(&self) -> Option<(&Term, &Term)> {
        if let Term::Meet(a, b) = &self.lhs {
            if **a == self.rhs {
                return Some((a, b));
            }
        }
        None
    }

    pub fn dual(&self) -> Equation {
        Equation { lhs: self.lhs.dual(), rhs: self.rhs.dual() }
    }

    pub fn max_var(&self) -> u32 {
        self.lhs.max_var().max(self.rhs.max_var())
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((s, t)) = self.as_leq() {
            write!(f, "{s} <= {t}")
        } else {
            write!(f, "{} = {}", self.lhs, self.rhs)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {message}")]
pub struct ParseTermError {
    pub pos: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Var(u32),
    Unit,
    Star,
    Caret,
    Vee,
    LParen,
    RParen,
    Leq,
    Eq,
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>, ParseTermError> {
    let bytes = s.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            b'*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            b'^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            b'v' => {
                toks.push((Tok::Vee, i));
                i += 1;
            }
            b'e' => {
                toks.push((Tok::Unit, i));
                i += 1;
            }
            b'=' => {
                toks.push((Tok::Eq, i));
                i += 1;
            }
            b'<' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    toks.push((Tok::Leq, i));
                    i += 2;
                } else {
                    return Err(ParseTermError {
                        pos: i,
                        message: "`<` must be followed by `=`".into(),
                    });
                }
            }
            b'x' => {
                let start = i;
                i += 1;
                let digits_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &s[digits_start..i];
                let index: u32 = digits.parse().map_err(|_| ParseTermError {
                    pos: start,
                    message: "variable needs a numeric index, like `x1`".into(),
                })?;
                if index == 0 {
                    return Err(ParseTermError {
                        pos: start,
                        message: "variables are numbered from 1".into(),
                    });
                }
                toks.push((Tok::Var(index), start));
            }
            _ => {
                return Err(ParseTermError {
                    pos: i,
                    message: format!("unexpected character `{}`", &s[i..i + 1]),
                });
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    input_len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|&(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.input_len, |&(_, p)| p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> ParseTermError {
        ParseTermError { pos: self.here(), message: message.into() }
    }

    fn parse_atom(&mut self) -> Result<Term, ParseTermError> {
        match self.bump() {
            Some(Tok::Unit) => Ok(Term::Unit),
            Some(Tok::Var(i)) => Ok(Term::Var(i)),
            Some(Tok::LParen) => {
                let t = self.parse_term()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(t),
                    _ => Err(self.err("expected `)`")),
                }
            }
            _ => Err(self.err("expected a variable, `e`, or `(`")),
        }
    }

    fn parse_prod(&mut self) -> Result<Term, ParseTermError> {
        let mut acc = self.parse_atom()?;
        while self.peek() == Some(Tok::Star) {
            self.bump();
            acc = Term::prod(acc, self.parse_atom()?);
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<Term, ParseTermError> {
        let mut acc = self.parse_prod()?;
        let op = match self.peek() {
            Some(t @ (Tok::Caret | Tok::Vee)) => t,
            _ => return Ok(acc),
        };
        while self.peek() == Some(op) {
            self.bump();
            let rhs = self.parse_prod()?;
            acc = if op == Tok::Caret { Term::meet(acc, rhs) } else { Term::join(acc, rhs) };
        }
        if matches!(self.peek(), Some(Tok::Caret | Tok::Vee)) {
            return Err(self.err("cannot mix `^` and `v` without parentheses"));
        }
        Ok(acc)
    }

    fn expect_end(&self) -> Result<(), ParseTermError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }
}

impl FromStr for Term {
    type Err = ParseTermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let toks = tokenize(s)?;
        let mut p = Parser { toks: &toks, pos: 0, input_len: s.len() };
        let t = p.parse_term()?;
        p.expect_end()?;
        Ok(t)
    }
}

impl FromStr for Equation {
    type Err = ParseTermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let toks = tokenize(s)?;
        let mut p = Parser { toks: &toks, pos: 0, input_len: s.len() };
        let lhs = p.parse_term()?;
        let relation = p.bump().ok_or_else(|| p.err("expected `<=` or `=`"))?;
        let rhs = p.parse_term()?;
        p.expect_end()?;
        match relation {
            Tok::Leq => Ok(Equation::leq(lhs, rhs)),
            Tok::Eq => Ok(Equation::eq(lhs, rhs)),
            _ => Err(ParseTermError { pos: 0, message: "expected `<=` or `=`".into() }),
        }
    }
}

/// Assigns a rank to every variable: index `i` maps to `valuation[i - 1]`.
pub type Valuation = Vec<usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("variable x{0} is not covered by the valuation")]
pub struct UnboundVariable(pub u32);

/// Evaluates a term to a rank. Meet and join are min and max of ranks.
pub fn eval(m: &FinOrdMonoid, t: &Term, valuation: &[usize]) -> Result<usize, UnboundVariable> {
    match t {
        Term::Var(i) => {
            valuation.get((*i - 1) as usize).copied().ok_or(UnboundVariable(*i))
        }
        Term::Unit => Ok(m.unit()),
        Term::Prod(a, b) => Ok(m.mul(eval(m, a, valuation)?, eval(m, b, valuation)?)),
        Term::Meet(a, b) => Ok(eval(m, a, valuation)?.min(eval(m, b, valuation)?)),
        Term::Join(a, b) => Ok(eval(m, a, valuation)?.max(eval(m, b, valuation)?)),
    }
}

fn check_valuation_cap(n: usize, vars: u32) -> Result<u64, CapExceeded> {
    let mut total: u64 = 1;
    for _ in 0..vars {
        total = match total.checked_mul(n as u64) {
            Some(t) if t <= caps::MAX_VALUATIONS => t,
            _ => {
                return Err(CapExceeded {
                    what: "valuations to enumerate",
                    limit: caps::MAX_VALUATIONS,
                    requested: (n as u64).saturating_pow(vars),
                })
            }
        };
    }
    Ok(total)
}

/// First failing valuation in lexicographic order (x1 most significant),
/// or none if the equation holds everywhere.
pub fn failure_witness(
    m: &FinOrdMonoid,
    equation: &Equation,
) -> Result<Option<Valuation>, CapExceeded> {
    let vars = equation.max_var();
    check_valuation_cap(m.size(), vars)?;
    let n = m.size();
    let mut valuation = vec![0usize; vars as usize];
    loop {
        let lhs = eval(m, &equation.lhs, &valuation).expect("valuation covers all variables");
        let rhs = eval(m, &equation.rhs, &valuation).expect("valuation covers all variables");
        if lhs != rhs {
            return Ok(Some(valuation));
        }
        // Odometer step on the least significant (last) position.
        let mut k = valuation.len();
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            valuation[k] += 1;
            if valuation[k] < n {
                break;
            }
            valuation[k] = 0;
        }
    }
}

/// Whether the equation holds under every valuation.
pub fn satisfies(m: &FinOrdMonoid, equation: &Equation) -> Result<bool, CapExceeded> {
    Ok(failure_witness(m, equation)?.is_none())
}

/// The inequality `z1*x*z2 ^ w1*y*w2 <= z1*y*z2 v w1*x*w2` (with x, y, z1,
/// z2, w1, w2 as x1..x6), valid in every chain algebra.
pub fn semilinearity() -> Equation {
    let sandwich = |outer_left: u32, mid: u32, outer_right: u32| {
        Term::prod(
            Term::prod(Term::var(outer_left), Term::var(mid)),
            Term::var(outer_right),
        )
    };
    Equation::leq(
        Term::meet(sandwich(3, 1, 4), sandwich(5, 2, 6)),
        Term::join(sandwich(3, 2, 4), sandwich(5, 1, 6)),
    )
}

/// Label order of the chain `c_n` (0 stands for the unit), bottom first.
fn cn_labels(n: usize) -> Vec<usize> {
    let mut labels = Vec::with_capacity(n);
    if n.is_multiple_of(2) {
        labels.extend((1..n).rev().filter(|l| l % 2 == 1));
        labels.push(0);
        labels.extend((1..n).filter(|l| l % 2 == 0));
    } else {
        labels.extend((1..n).rev().filter(|l| l % 2 == 0));
        labels.push(0);
        labels.extend((1..n).filter(|l| l % 2 == 1));
    }
    labels
}

/// Dual chain `c_n'`: same labels, reversed comparisons.
fn cnd_labels(n: usize) -> Vec<usize> {
    let mut labels = cn_labels(n);
    labels.reverse();
    labels
}

fn chain_from_labels(labels: &[usize]) -> FinOrdMonoid {
    let n = labels.len();
    let mut rank_of = vec![0usize; n];
    for (rank, &label) in labels.iter().enumerate() {
        rank_of[label] = rank;
    }
    let mut table = vec![0usize; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = rank_of[labels[a].max(labels[b])];
        }
    }
    FinOrdMonoid::new(n, rank_of[0], table).expect("label-max chains are valid")
}

/// The commutative chain with labels {e,1,..,n-1}, product = label max,
/// and the zig-zag order that alternates sides of the unit, ending below.
pub fn make_cn(n: usize) -> FinOrdMonoid {
    assert!(n >= 1);
    chain_from_labels(&cn_labels(n))
}

/// Order dual of [`make_cn`]: the same zig-zag ending above the unit.
pub fn make_cnd(n: usize) -> FinOrdMonoid {
    assert!(n >= 1);
    chain_from_labels(&cnd_labels(n))
}

/// The two sides `(s_n, t_n)` of the equation `sigma(n)`.
///
/// `s_2 = x1`, `t_2 = e`; passing from n to n+1 meets `x(n-1)*xn` onto the
/// left side when n+1 is even and joins it onto the right side when n+1 is
/// odd.
pub fn sigma_parts(n: u32) -> (Term, Term) {
    assert!(n >= 2);
    let mut s = Term::var(1);
    let mut t = Term::Unit;
    for k in 3..=n {
        let step = Term::prod(Term::var(k - 2), Term::var(k - 1));
        if k % 2 == 0 {
            s = Term::meet(s, step);
        } else {
            t = Term::join(t, step);
        }
    }
    (s, t)
}

/// `sigma(n) = (s_n <= t_n)` over variables x1..x(n-1).
pub fn sigma(n: u32) -> Equation {
    let (s, t) = sigma_parts(n);
    Equation::leq(s, t)
}

/// Order dual of `sigma(n)`, over the same variables: `t_n' <= s_n'`.
pub fn sigma_dual(n: u32) -> Equation {
    let (s, t) = sigma_parts(n);
    Equation::leq(t.dual(), s.dual())
}

/// `gamma(n)`: `s_n(X)*t_n'(Y) <= t_n(X)*s_n'(Y)` where the primed sides
/// are order duals over fresh variables y_k = x(n-1+k).
pub fn gamma(n: u32) -> Equation {
    assert!(n >= 3);
    let (s, t) = sigma_parts(n);
    let fresh = |term: &Term| term.substitute(&|i| Term::var(n - 1 + i));
    Equation::leq(
        Term::prod(s.clone(), fresh(&t.dual())),
        Term::prod(t, fresh(&s.dual())),
    )
}

/// Decides `gamma(n)` without enumerating joint valuations: the two sides
/// factor through the value pairs of `(s_n, t_n)` and of the dualized pair,
/// so it is enough to compare products of reachable pairs.
pub fn satisfies_gamma(m: &FinOrdMonoid, n: u32) -> Result<bool, CapExceeded> {
    assert!(n >= 3);
    let (s, t) = sigma_parts(n);
    let vars = n - 1;
    let total = check_valuation_cap(m.size(), vars)?;
    let alg_size = m.size();
    let pairs_of = |left: &Term, right: &Term| -> HashSet<(usize, usize)> {
        let mut valuation = vec![0usize; vars as usize];
        let mut out = HashSet::new();
        for _ in 0..total {
            let a = eval(m, left, &valuation).expect("valuation covers all variables");
            let b = eval(m, right, &valuation).expect("valuation covers all variables");
            out.insert((a, b));
            let mut k = valuation.len();
            while k > 0 {
                k -= 1;
                valuation[k] += 1;
                if valuation[k] < alg_size {
                    break;
                }
                valuation[k] = 0;
            }
        }
        out
    };
    let left_pairs = pairs_of(&s, &t);
    let right_pairs = pairs_of(&t.dual(), &s.dual());
    for &(sv, tv) in &left_pairs {
        for &(tdv, sdv) in &right_pairs {
            if m.mul(sv, tdv) > m.mul(tv, sdv) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// If `m` fails `sigma(n)`, returns the first failing valuation together
/// with the subalgebra its values generate.
pub fn axiom_witness_subalgebra(
    m: &FinOrdMonoid,
    n: u32,
) -> Result<Option<(Valuation, FinOrdMonoid)>, CapExceeded> {
    assert!(n >= 2);
    let witness = failure_witness(m, &sigma(n))?;
    Ok(witness.map(|valuation| {
        let (sub, _) = m.generated_subalgebra(&valuation);
        (valuation, sub)
    }))
}
