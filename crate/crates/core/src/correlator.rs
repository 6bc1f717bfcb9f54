//! Evaluation of disconnected and connected vacuum correlators of E-operator
//! words by iterated commutation.
//!
//! The engine repeatedly rewrites the rightmost operator with positive
//! subscript: commuting it past its right neighbour produces a *passing* term
//! (the two operators swapped) and a *commutation* term (the pair merged, with
//! a q-integer bracket prefactor). Terms whose word can no longer reach the
//! vacuum are dropped as soon as they arise. Identical words are aggregated,
//! which collapses the otherwise exponential recursion tree.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactalg::{qint, QIntProduct, QRational};
use crate::{Int, Laurent};

/// A word `E_(a_1)(b_1 hbar) ... E_(a_m)(b_m hbar)` of E-operators.
///
/// Operators with non-negative subscript must carry a positive argument
/// (`a_i >= 0` implies `b_i > 0`); this keeps every bracket arising during
/// evaluation strictly positive and rules out the undefined `E_0(0)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OperatorWord {
    ops: Vec<(i64, u64)>,
}

impl OperatorWord {
    pub fn new(ops: Vec<(i64, u64)>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::InvalidWord("word must contain at least one operator".into()));
        }
        for (i, &(a, b)) in ops.iter().enumerate() {
            if a >= 0 && b == 0 {
                return Err(Error::InvalidWord(format!(
                    "operator {i} has a = {a} >= 0 but b = 0"
                )));
            }
        }
        Ok(OperatorWord { ops })
    }

    pub fn ops(&self) -> &[(i64, u64)] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    /// Parses the text form `"1:1,1:1,-2:0"` (comma-separated `a:b` pairs).
    pub fn parse(s: &str) -> Result<Self> {
        let mut ops = Vec::new();
        for (i, tok) in s.trim().split(',').enumerate() {
            let tok = tok.trim();
            let (a, b) = tok.split_once(':').ok_or_else(|| Error::Parse {
                position: i,
                message: format!("expected a:b pair, got {tok:?}"),
            })?;
            let a: i64 = a.trim().parse().map_err(|_| Error::Parse {
                position: i,
                message: format!("invalid subscript {a:?}"),
            })?;
            let b: u64 = b.trim().parse().map_err(|_| Error::Parse {
                position: i,
                message: format!("invalid argument {b:?}"),
            })?;
            ops.push((a, b));
        }
        OperatorWord::new(ops)
    }

    fn subscript_sum(&self) -> i64 {
        self.ops.iter().map(|&(a, _)| a).sum()
    }

    fn argument_sum(&self) -> u64 {
        self.ops.iter().map(|&(_, b)| b).sum()
    }
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self
            .ops
            .iter()
            .map(|(a, b)| format!("{a}:{b}"))
            .collect::<Vec<_>>()
            .join(",");
        write!(f, "{s}")
    }
}

/// Score of a term: the sum of its bracket arguments, minus the sum of the
/// word's operator arguments, plus the antisymmetrised cross sum
/// `sum_(i<j) (a_i b_j - a_j b_i)`. Commutation preserves the score; passing
/// lowers it by twice the bracket argument, which bounds the exponents of the
/// final polynomial by the initial score.
pub fn score(factors: &[u64], word: &OperatorWord) -> i64 {
    let k: i64 = factors.iter().map(|&f| f as i64).sum();
    k + word_score(word.ops())
}

fn word_score(ops: &[(i64, u64)]) -> i64 {
    let b_sum: i64 = ops.iter().map(|&(_, b)| b as i64).sum();
    let mut cross = 0i64;
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            cross += ops[i].0 * ops[j].1 as i64 - ops[j].0 * ops[i].1 as i64;
        }
    }
    cross - b_sum
}

/// Result of a connected-correlator evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorResult {
    qproducts: Option<Vec<QIntProduct>>,
    value: QRational,
    max_score: Option<i64>,
}

impl CorrelatorResult {
    /// q-integer product form of the value, when every surviving term's
    /// trailing bracket cancelled against the final `1/[b]`.
    pub fn qproducts(&self) -> Option<&[QIntProduct]> {
        self.qproducts.as_deref()
    }

    pub fn value(&self) -> &QRational {
        &self.value
    }

    /// The value as a Laurent polynomial (exact for in-scope words).
    pub fn laurent(&self) -> Result<Laurent> {
        self.value.to_laurent()
    }

    /// Largest score seen across all terms of an instrumented run.
    pub fn max_score(&self) -> Option<i64> {
        self.max_score
    }

    pub fn to_json(&self) -> Value {
        json!({
            "qproducts": self.qproducts.as_ref().map(|ps| {
                ps.iter().map(QIntProduct::to_json).collect::<Vec<_>>()
            }),
            "laurent": self.laurent().ok().map(|p| p.to_json()),
            "max_score": self.max_score,
        })
    }
}

impl fmt::Display for CorrelatorResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.qproducts {
            Some(ps) if !ps.is_empty() => {
                let s = ps.iter().map(QIntProduct::to_string).collect::<Vec<_>>().join(" + ");
                write!(f, "{s}")
            }
            Some(_) => write!(f, "0"),
            None => write!(f, "{}", self.value),
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Disconnected,
    Connected,
}

/// Can a term with this word still contribute? Reading left to right, the
/// running subscript sum must stay non-negative (disconnected) or strictly
/// positive before the final operator (connected).
fn prefix_ok(ops: &[(i64, u64)], mode: Mode) -> bool {
    let mut sum = 0i64;
    for &(a, _) in &ops[..ops.len() - 1] {
        sum += a;
        let ok = match mode {
            Mode::Disconnected => sum >= 0,
            Mode::Connected => sum > 0,
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Scalar attached to a word: integer combination of products of q-integer
/// brackets, keyed by the sorted bracket multiset.
type Scalar = BTreeMap<Vec<u64>, Int>;

/// Queue of pending terms in a topological order: popping the maximum key
/// guarantees a word is never revisited, because passing keeps the length and
/// strictly lowers the total right-distance of positive operators, while
/// commutation shortens the word.
struct Queue {
    pending: BTreeMap<(usize, u64, Vec<(i64, u64)>), Scalar>,
}

fn positive_spread(ops: &[(i64, u64)]) -> u64 {
    let m = ops.len();
    ops.iter()
        .enumerate()
        .filter(|(_, &(a, _))| a > 0)
        .map(|(i, _)| (m - 1 - i) as u64)
        .sum()
}

impl Queue {
    fn new() -> Self {
        Queue { pending: BTreeMap::new() }
    }

    fn insert(&mut self, ops: Vec<(i64, u64)>, factors: Vec<u64>, coeff: Int, mode: Mode) {
        if !prefix_ok(&ops, mode) {
            return;
        }
        let key = (ops.len(), positive_spread(&ops), ops);
        let scalar = self.pending.entry(key).or_default();
        let entry = scalar.entry(factors).or_insert_with(Int::zero);
        *entry += coeff;
        if entry.is_zero() {
            // cannot happen while all coefficients are positive, but keep the
            // map clean regardless
            let factors: Vec<Vec<u64>> =
                scalar.iter().filter(|(_, c)| c.is_zero()).map(|(f, _)| f.clone()).collect();
            for f in factors {
                scalar.remove(&f);
            }
        }
    }

    fn pop(&mut self) -> Option<(Vec<(i64, u64)>, Scalar)> {
        self.pending.pop_last().map(|((_, _, ops), scalar)| (ops, scalar))
    }
}

fn expand_scalar(scalar: &Scalar) -> Laurent {
    let mut acc = Laurent::zero();
    for (factors, coeff) in scalar {
        acc = &acc + &QIntProduct::new(coeff.clone(), factors.clone()).expand();
    }
    acc
}

struct Engine {
    mode: Mode,
    traced: bool,
    queue: Queue,
    max_score: i64,
    /// terminal scalars of the connected run (single `E_0(B hbar)` words)
    terminal: Scalar,
    /// accumulated value of the disconnected run
    value: QRational,
}

impl Engine {
    fn run(word: &OperatorWord, mode: Mode, traced: bool) -> Result<(QRational, Scalar, i64)> {
        let mut eng = Engine {
            mode,
            traced,
            queue: Queue::new(),
            max_score: i64::MIN,
            terminal: Scalar::new(),
            value: QRational::zero(),
        };
        if word.subscript_sum() != 0 {
            return Ok((QRational::zero(), Scalar::new(), i64::MIN));
        }
        eng.queue.insert(word.ops().to_vec(), Vec::new(), Int::one(), mode);
        while let Some((ops, scalar)) = eng.queue.pop() {
            eng.step(ops, scalar)?;
        }
        Ok((eng.value, eng.terminal, eng.max_score))
    }

    fn step(&mut self, ops: Vec<(i64, u64)>, scalar: Scalar) -> Result<()> {
        if self.traced {
            for factors in scalar.keys() {
                let s: i64 = factors.iter().map(|&f| f as i64).sum::<i64>() + word_score(&ops);
                self.max_score = self.max_score.max(s);
            }
        }
        let rightmost_pos = ops.iter().rposition(|&(a, _)| a > 0);
        let Some(i) = rightmost_pos else {
            // all subscripts are zero (a negative-only remainder would have a
            // negative total and is unreachable from a zero-sum word)
            debug_assert!(ops.iter().all(|&(a, _)| a == 0));
            match self.mode {
                Mode::Disconnected => {
                    let mut den = Laurent::one();
                    for &(_, b) in &ops {
                        den = &den * &qint(b as i64);
                    }
                    let num = expand_scalar(&scalar);
                    self.value = &self.value + &QRational::new(num, den);
                }
                Mode::Connected => {
                    debug_assert_eq!(ops.len(), 1);
                    for (factors, coeff) in scalar {
                        let entry = self.terminal.entry(factors).or_insert_with(Int::zero);
                        *entry += coeff;
                    }
                }
            }
            return Ok(());
        };
        debug_assert!(i + 1 < ops.len(), "prefix rule keeps positive operators off the end");
        let (a1, b1) = ops[i];
        let (a2, b2) = ops[i + 1];
        let t = a1 * b2 as i64 - a2 * b1 as i64;
        if t <= 0 {
            return Err(Error::ScoreViolation(format!(
                "bracket argument {t} not positive at position {i} of word {ops:?}"
            )));
        }
        if self.traced {
            // commutation preserves the score, passing lowers it by 2t: both
            // statements only move weight between the bracket sum and the
            // cross sum, so checking the word parts suffices
            let parent = word_score(&ops);
            let mut merged_ops = ops.clone();
            merged_ops[i] = (a1 + a2, b1 + b2);
            merged_ops.remove(i + 1);
            let merged = word_score(&merged_ops);
            if merged + t != parent {
                return Err(Error::ScoreViolation(format!(
                    "commutation changed the score: {parent} -> {} at {ops:?}",
                    merged + t
                )));
            }
            let mut passed_ops = ops.clone();
            passed_ops.swap(i, i + 1);
            let passed = word_score(&passed_ops);
            if passed != parent - 2 * t || t <= 0 {
                return Err(Error::ScoreViolation(format!(
                    "passing changed the score by {} (expected -{}) at {ops:?}",
                    passed - parent,
                    2 * t
                )));
            }
        }
        // passing term
        let mut passed = ops.clone();
        passed.swap(i, i + 1);
        for (factors, coeff) in &scalar {
            self.queue.insert(passed.clone(), factors.clone(), coeff.clone(), self.mode);
        }
        // commutation term, with bracket [a1 b2 - a2 b1]
        let mut merged = ops;
        merged[i] = (a1 + a2, b1 + b2);
        merged.remove(i + 1);
        for (factors, coeff) in &scalar {
            let mut f = factors.clone();
            let idx = f.partition_point(|&x| x < t as u64);
            f.insert(idx, t as u64);
            self.queue.insert(merged.clone(), f, coeff.clone(), self.mode);
        }
        Ok(())
    }
}

/// Disconnected vacuum correlator `<word>`.
pub fn disconnected(word: &OperatorWord) -> Result<QRational> {
    if word.ops().iter().all(|&(a, _)| a == 0) {
        let mut den = Laurent::one();
        for &(_, b) in word.ops() {
            den = &den * &qint(b as i64);
        }
        return Ok(QRational::new(Laurent::one(), den));
    }
    let (value, _, _) = Engine::run(word, Mode::Disconnected, false)?;
    Ok(value)
}

/// Connected vacuum correlator `<word>°`.
pub fn connected(word: &OperatorWord) -> Result<CorrelatorResult> {
    connected_impl(word, false)
}

/// Same as [`connected`], but asserts the score bookkeeping at every rewrite
/// step and records the maximum score encountered.
pub fn connected_traced(word: &OperatorWord) -> Result<CorrelatorResult> {
    connected_impl(word, true)
}

fn connected_impl(word: &OperatorWord, traced: bool) -> Result<CorrelatorResult> {
    if word.ops().iter().all(|&(a, _)| a == 0) {
        // step (3): delta_(m,1) / [b_1]
        let value = if word.len() == 1 {
            QRational::inverse_qint(word.ops()[0].1 as i64)
        } else {
            QRational::zero()
        };
        return Ok(CorrelatorResult { qproducts: None, value, max_score: None });
    }
    let (_, terminal, max_score) = Engine::run(word, Mode::Connected, traced)?;
    let b_total = word.argument_sum();
    let mut qproducts = Some(Vec::new());
    let mut numerator = Laurent::zero();
    // iterate from the largest factor vector down, so rendered q-product
    // sums lead with the highest q-integers
    for (factors, coeff) in terminal.iter().rev() {
        numerator = &numerator + &QIntProduct::new(coeff.clone(), factors.clone()).expand();
        if let Some(ps) = qproducts.as_mut() {
            if let Some(idx) = factors.iter().position(|&f| f == b_total) {
                let mut reduced = factors.clone();
                reduced.remove(idx);
                ps.push(QIntProduct::new(coeff.clone(), reduced));
            } else {
                qproducts = None;
            }
        }
    }
    let value = if terminal.is_empty() {
        QRational::zero()
    } else {
        QRational::new(numerator, qint(b_total as i64))
    };
    Ok(CorrelatorResult {
        qproducts,
        value,
        max_score: if traced && max_score > i64::MIN { Some(max_score) } else { None },
    })
}

/// The word `E_1(hbar)^k E_(-mu_1)(0) ... E_(-mu_n)(0)` whose connected
/// correlator generates the simple Hurwitz numbers of profile `mu`, and its
/// orbifold generalisation `E_r(r hbar)^(d/r) E_(-mu_1)(0) ...`.
pub fn hurwitz_word(mu: &[u64], r: u64) -> Result<OperatorWord> {
    let d: u64 = mu.iter().sum();
    if r == 0 || d % r != 0 {
        return Err(Error::InvalidQuery(format!(
            "degree {d} is not divisible by the orbifold parameter {r}"
        )));
    }
    let mut ops = Vec::new();
    for _ in 0..d / r {
        ops.push((r as i64, r));
    }
    for &p in mu {
        ops.push((-(p as i64), 0));
    }
    OperatorWord::new(ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::qint_product;
    use crate::Rat;

    fn word(ops: &[(i64, u64)]) -> OperatorWord {
        OperatorWord::new(ops.to_vec()).unwrap()
    }

    fn rat(n: i64) -> Rat {
        Rat::from(Int::from(n))
    }

    /// Naive recursive evaluation of Algorithm 3.1 without term aggregation,
    /// used as a reference for the queue-based engine.
    fn naive_disconnected(ops: &[(i64, u64)]) -> QRational {
        if ops.iter().map(|&(a, _)| a).sum::<i64>() != 0 {
            return QRational::zero();
        }
        let mut sum = 0i64;
        for &(a, _) in &ops[..ops.len() - 1] {
            sum += a;
            if sum < 0 {
                return QRational::zero();
            }
        }
        let Some(i) = ops.iter().rposition(|&(a, _)| a > 0) else {
            let mut den = Laurent::one();
            for &(_, b) in ops {
                den = &den * &qint(b as i64);
            }
            return QRational::new(Laurent::one(), den);
        };
        let (a1, b1) = ops[i];
        let (a2, b2) = ops[i + 1];
        let mut passed = ops.to_vec();
        passed.swap(i, i + 1);
        let mut merged = ops.to_vec();
        merged[i] = (a1 + a2, b1 + b2);
        merged.remove(i + 1);
        let bracket = QRational::from_laurent(qint(a1 * b2 as i64 - a2 * b1 as i64));
        &naive_disconnected(&passed) + &(&bracket * &naive_disconnected(&merged))
    }

    #[test]
    fn three_point_formula_instance() {
        // <E_1(h) E_1(h) E_-2(h)> = [3]^2/[3] = [3]
        let v = disconnected(&word(&[(1, 1), (1, 1), (-2, 1)])).unwrap();
        assert_eq!(v.to_laurent().unwrap(), qint(3));
    }

    #[test]
    fn three_point_closed_form() {
        // [a1 b2 + a2 b2 + a2 b3] [a1 b1 + a1 b2 + a1 b3] / [b1 + b2 + b3]
        for (a1, a2) in [(1i64, 1i64), (1, 2), (2, 1), (3, 2)] {
            for (b1, b2, b3) in [(1u64, 1u64, 1u64), (1, 2, 3), (2, 1, 2), (3, 1, 1)] {
                let w = word(&[(a1, b1), (a2, b2), (-a1 - a2, b3)]);
                let got = disconnected(&w).unwrap();
                let num = &qint::<Rat>(a1 * b2 as i64 + a2 * b2 as i64 + a2 * b3 as i64)
                    * &qint(a1 * (b1 + b2 + b3) as i64);
                let expected = QRational::new(num, qint((b1 + b2 + b3) as i64));
                assert_eq!(got, expected, "a=({a1},{a2}) b=({b1},{b2},{b3})");
            }
        }
    }

    #[test]
    fn diagonal_words() {
        let v = disconnected(&word(&[(0, 1), (0, 2)])).unwrap();
        let expected = QRational::new(Laurent::one(), &qint::<Rat>(1) * &qint(2));
        assert_eq!(v, expected);
        assert!(disconnected(&word(&[(5, 1)])).unwrap().is_zero());
    }

    #[test]
    fn invalid_words() {
        assert!(OperatorWord::new(vec![]).is_err());
        assert!(OperatorWord::new(vec![(1, 0)]).is_err());
        assert!(OperatorWord::new(vec![(0, 0)]).is_err());
        assert!(OperatorWord::new(vec![(-1, 0)]).is_ok());
    }

    #[test]
    fn parse_and_display() {
        let w = OperatorWord::parse("1:1, 1:1, -2:0").unwrap();
        assert_eq!(w, word(&[(1, 1), (1, 1), (-2, 0)]));
        assert_eq!(w.to_string(), "1:1,1:1,-2:0");
        assert!(OperatorWord::parse("1:1,x").is_err());
        assert!(OperatorWord::parse("1").is_err());
    }

    #[test]
    fn connected_small_profiles() {
        // mu = (2): [2]
        let r = connected(&hurwitz_word(&[2], 1).unwrap()).unwrap();
        assert_eq!(r.laurent().unwrap(), qint(2));
        assert_eq!(r.qproducts().unwrap(), &[QIntProduct::new(Int::one(), vec![2])]);
        // mu = (2,2): [6][2]^3 + 3[2]^4
        let r = connected(&hurwitz_word(&[2, 2], 1).unwrap()).unwrap();
        let expected = &qint_product::<Rat>(&[6, 2, 2, 2])
            + &qint_product::<Rat>(&[2, 2, 2, 2]).scale(&rat(3));
        assert_eq!(r.laurent().unwrap(), expected);
        // mu = (2,1,1): 3[2]^3[1]^2 + [3]^2[2]^3
        let r = connected(&hurwitz_word(&[2, 1, 1], 1).unwrap()).unwrap();
        let expected = &qint_product::<Rat>(&[2, 2, 2, 1, 1]).scale(&rat(3))
            + &qint_product::<Rat>(&[3, 3, 2, 2, 2]);
        assert_eq!(r.laurent().unwrap(), expected);
        assert_eq!(
            r.qproducts().unwrap(),
            &[
                QIntProduct::new(Int::one(), vec![2, 2, 2, 3, 3]),
                QIntProduct::new(Int::from(3), vec![1, 1, 2, 2, 2]),
            ]
        );
        assert_eq!(r.to_string(), "[3]^2[2]^3 + 3[2]^3[1]^2");
        // mu = (2,2) renders leading with the highest q-integer
        let r = connected(&hurwitz_word(&[2, 2], 1).unwrap()).unwrap();
        assert_eq!(r.to_string(), "[6][2]^3 + 3[2]^4");
    }

    #[test]
    fn connected_prefix_kill() {
        // prefix sum hits zero mid-word
        let r = connected(&word(&[(1, 1), (-1, 0), (1, 1), (-1, 0)])).unwrap();
        assert!(r.value().is_zero());
        // but the disconnected value factors through the pieces: <E1 E-1>^2-ish
        let d = disconnected(&word(&[(1, 1), (-1, 0), (1, 1), (-1, 0)])).unwrap();
        assert!(!d.is_zero());
    }

    #[test]
    fn single_diagonal_connected() {
        let r = connected(&word(&[(0, 2)])).unwrap();
        assert_eq!(*r.value(), QRational::inverse_qint(2));
        assert!(r.laurent().is_err());
        let r = connected(&word(&[(0, 1), (0, 2)])).unwrap();
        assert!(r.value().is_zero());
    }

    #[test]
    fn score_examples() {
        let w = hurwitz_word(&[2, 1], 1).unwrap();
        assert_eq!(score(&[], &w), 6);
        let ones = word(&[(1, 1), (1, 1), (1, 1), (-1, 0), (-1, 0), (-1, 0)]);
        assert_eq!(score(&[], &ones), 6);
        assert_eq!(score(&[4], &word(&[(0, 4)])), 0);
    }

    #[test]
    fn traced_matches_connected() {
        for mu in [vec![2u64], vec![3], vec![2, 1], vec![2, 1, 1], vec![2, 2]] {
            let w = hurwitz_word(&mu, 1).unwrap();
            let plain = connected(&w).unwrap();
            let traced = connected_traced(&w).unwrap();
            assert_eq!(plain.value(), traced.value());
            let d: u64 = mu.iter().sum();
            assert_eq!(traced.max_score(), Some((d * (d - 1)) as i64), "mu = {mu:?}");
        }
    }

    #[test]
    fn shape_of_surviving_terms() {
        // every q-product term of a length-m word has exactly m - 2 brackets
        // after the final [a b]/[b] reduction, i.e. m - 1 before it
        for mu in [vec![2u64, 1], vec![3, 1], vec![2, 2, 1]] {
            let w = hurwitz_word(&mu, 1).unwrap();
            let r = connected(&w).unwrap();
            for p in r.qproducts().unwrap() {
                assert_eq!(p.factors().len(), w.len() - 2);
            }
        }
    }

    #[test]
    fn engine_matches_naive_recursion() {
        let words: Vec<Vec<(i64, u64)>> = vec![
            vec![(1, 1), (1, 1), (-2, 1)],
            vec![(2, 1), (1, 2), (-3, 1)],
            vec![(1, 1), (1, 1), (1, 1), (-2, 0), (-1, 0)],
            vec![(0, 1), (1, 1), (-1, 2)],
            vec![(1, 2), (-1, 1), (1, 1), (-1, 3)],
            vec![(2, 2), (-1, 0), (-1, 0)],
        ];
        for ops in words {
            let w = word(&ops);
            assert_eq!(disconnected(&w).unwrap(), naive_disconnected(&ops), "word {ops:?}");
        }
    }

    #[test]
    fn orbifold_word_shape() {
        let w = hurwitz_word(&[4, 2], 2).unwrap();
        assert_eq!(w.ops(), &[(2, 2), (2, 2), (2, 2), (-4, 0), (-2, 0)]);
        assert!(hurwitz_word(&[3], 2).is_err());
    }
}
