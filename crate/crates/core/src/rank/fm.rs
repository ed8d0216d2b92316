//! Exact linear feasibility by Fourier–Motzkin elimination.
//!
//! Systems are integer rows `a·x >= b` and `a·x = b` over rational unknowns.
//! Equalities are substituted away first; inequalities are then eliminated
//! one variable at a time, choosing the variable with the fewest generated
//! rows and dropping rows by Chernikov's history rule. A feasible system
//! yields a rational witness by back-substitution.
//!
//! Arithmetic runs in `i128` and is redone in `BigInt` on overflow.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<i64>,
    pub rel: Relation,
    pub rhs: i64,
}

impl Row {
    pub fn ge(coeffs: Vec<i64>, rhs: i64) -> Row {
        Row {
            coeffs,
            rel: Relation::Ge,
            rhs,
        }
    }

    pub fn eq(coeffs: Vec<i64>, rhs: i64) -> Row {
        Row {
            coeffs,
            rel: Relation::Eq,
            rhs,
        }
    }
}

trait Num: Clone + Ord + std::hash::Hash + std::fmt::Debug {
    fn from_i64(v: i64) -> Self;
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn abs(&self) -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Self;
    fn gcd(&self, o: &Self) -> Self;
    fn div_exact(&self, o: &Self) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Num for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_positive(&self) -> bool {
        *self > 0
    }
    fn abs(&self) -> Self {
        i128::abs(*self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Num for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

#[derive(Clone, Debug)]
struct Ineq<T> {
    coeffs: Vec<T>,
    rhs: T,
    hist: u128,
}

/// Equality `coeffs·x = rhs` used to eliminate `var`.
#[derive(Clone, Debug)]
struct Subst<T> {
    var: usize,
    coeffs: Vec<T>,
    rhs: T,
}

struct Overflow;

fn normalize<T: Num>(coeffs: &mut [T], rhs: &mut T) {
    let mut g = T::zero();
    for c in coeffs.iter() {
        if !c.is_zero() {
            g = if g.is_zero() { c.abs() } else { g.gcd(c) };
        }
    }
    if g.is_zero() {
        return;
    }
    if !rhs.is_zero() {
        g = g.gcd(rhs);
    }
    if g != T::from_i64(1) {
        for c in coeffs.iter_mut() {
            *c = c.div_exact(&g);
        }
        *rhs = rhs.div_exact(&g);
    }
}

/// `alpha * a + beta * b` on coefficient vectors.
fn combine<T: Num>(alpha: &T, a: &[T], beta: &T, b: &[T]) -> Result<Vec<T>, Overflow> {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let l = alpha.mul(x).ok_or(Overflow)?;
            let r = beta.mul(y).ok_or(Overflow)?;
            l.add(&r).ok_or(Overflow)
        })
        .collect()
}

fn lin<T: Num>(alpha: &T, a: &T, beta: &T, b: &T) -> Result<T, Overflow> {
    let l = alpha.mul(a).ok_or(Overflow)?;
    let r = beta.mul(b).ok_or(Overflow)?;
    l.add(&r).ok_or(Overflow)
}

struct Trace<T> {
    substs: Vec<Subst<T>>,
    /// (variable, rows containing it just before its elimination)
    stages: Vec<(usize, Vec<Ineq<T>>)>,
}

/// Returns `Ok(None)` if infeasible, `Ok(Some(trace))` if feasible.
fn solve<T: Num>(nvars: usize, rows: &[Row], keep_trace: bool) -> Result<Option<Trace<T>>, Overflow> {
    let mut eqs: Vec<(Vec<T>, T)> = Vec::new();
    let mut ineqs: Vec<Ineq<T>> = Vec::new();
    for r in rows {
        let c: Vec<T> = r.coeffs.iter().map(|&v| T::from_i64(v)).collect();
        let b = T::from_i64(r.rhs);
        match r.rel {
            Relation::Eq => eqs.push((c, b)),
            Relation::Ge => {
                let k = ineqs.len();
                ineqs.push(Ineq {
                    coeffs: c,
                    rhs: b,
                    hist: if k < 128 { 1u128 << k } else { 0 },
                })
            }
        }
    }
    let history_ok = ineqs.len() <= 128;
    let mut trace = Trace {
        substs: Vec::new(),
        stages: Vec::new(),
    };

    // Substitute equalities.
    while let Some((mut c, mut b)) = eqs.pop() {
        normalize(&mut c, &mut b);
        let Some(j) = (0..nvars)
            .filter(|&j| !c[j].is_zero())
            .min_by_key(|&j| c[j].abs())
        else {
            if b.is_zero() {
                continue;
            }
            return Ok(None);
        };
        let a = c[j].clone();
        // For a row r with r_j != 0: |a|·r - r_j·sign(a)·(c·x - b).
        let sa = if a.is_positive() { T::from_i64(1) } else { T::from_i64(-1) };
        let abs_a = a.abs();
        let apply = |rc: &[T], rb: &T| -> Result<(Vec<T>, T), Overflow> {
            let f = rc[j].mul(&sa).ok_or(Overflow)?.neg();
            let nc = combine(&abs_a, rc, &f, &c)?;
            let nb = lin(&abs_a, rb, &f, &b)?;
            Ok((nc, nb))
        };
        for (ec, eb) in eqs.iter_mut() {
            if !ec[j].is_zero() {
                let (nc, nb) = apply(ec, eb)?;
                *ec = nc;
                *eb = nb;
            }
        }
        for iq in ineqs.iter_mut() {
            if !iq.coeffs[j].is_zero() {
                let (mut nc, mut nb) = apply(&iq.coeffs, &iq.rhs)?;
                normalize(&mut nc, &mut nb);
                iq.coeffs = nc;
                iq.rhs = nb;
            }
        }
        if keep_trace {
            trace.substs.push(Subst {
                var: j,
                coeffs: c,
                rhs: b,
            });
        }
    }

    let mut alive: Vec<bool> = vec![true; nvars];
    for s in &trace.substs {
        alive[s.var] = false;
    }
    let mut eliminated = 0usize;
    loop {
        // Constant rows and duplicates.
        let mut table: HashMap<Vec<T>, usize> = HashMap::new();
        let mut next: Vec<Ineq<T>> = Vec::with_capacity(ineqs.len());
        for iq in ineqs.drain(..) {
            if iq.coeffs.iter().all(|c| c.is_zero()) {
                if iq.rhs.is_positive() {
                    return Ok(None);
                }
                continue;
            }
            if history_ok && iq.hist.count_ones() as usize > eliminated + 1 {
                continue;
            }
            match table.get(&iq.coeffs) {
                Some(&k) => {
                    if iq.rhs > next[k].rhs {
                        next[k] = iq;
                    }
                }
                None => {
                    table.insert(iq.coeffs.clone(), next.len());
                    next.push(iq);
                }
            }
        }
        ineqs = next;
        if ineqs.is_empty() {
            break;
        }
        // Pick the variable generating the fewest rows.
        let mut best: Option<(usize, i64)> = None;
        for j in 0..nvars {
            if !alive[j] {
                continue;
            }
            let p = ineqs.iter().filter(|r| r.coeffs[j].is_positive()).count() as i64;
            let q = ineqs
                .iter()
                .filter(|r| !r.coeffs[j].is_zero() && !r.coeffs[j].is_positive())
                .count() as i64;
            if p + q == 0 {
                alive[j] = false;
                continue;
            }
            let cost = p * q - p - q;
            if best.map_or(true, |(_, c)| cost < c) {
                best = Some((j, cost));
            }
        }
        let Some((j, _)) = best else { break };
        alive[j] = false;
        let (with, without): (Vec<Ineq<T>>, Vec<Ineq<T>>) =
            ineqs.into_iter().partition(|r| !r.coeffs[j].is_zero());
        let pos: Vec<&Ineq<T>> = with.iter().filter(|r| r.coeffs[j].is_positive()).collect();
        let neg: Vec<&Ineq<T>> = with.iter().filter(|r| !r.coeffs[j].is_positive()).collect();
        let mut out = without;
        for p in &pos {
            for q in &neg {
                let alpha = q.coeffs[j].abs();
                let beta = p.coeffs[j].clone();
                let mut c = combine(&alpha, &p.coeffs, &beta, &q.coeffs)?;
                let mut b = lin(&alpha, &p.rhs, &beta, &q.rhs)?;
                normalize(&mut c, &mut b);
                out.push(Ineq {
                    coeffs: c,
                    rhs: b,
                    hist: p.hist | q.hist,
                });
            }
        }
        if keep_trace {
            trace.stages.push((j, with));
        }
        ineqs = out;
        eliminated += 1;
    }
    Ok(Some(trace))
}

fn to_rat(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

fn back_substitute<T: Num>(nvars: usize, trace: &Trace<T>) -> Vec<BigRational> {
    let mut x: Vec<BigRational> = vec![BigRational::zero(); nvars];
    let eval = |coeffs: &[T], skip: usize, x: &[BigRational]| -> BigRational {
        let mut s = BigRational::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if k != skip && !c.is_zero() {
                s += to_rat(&c.to_big()) * &x[k];
            }
        }
        s
    };
    for (j, rows) in trace.stages.iter().rev() {
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for r in rows {
            let cj = to_rat(&r.coeffs[*j].to_big());
            let bound = (to_rat(&r.rhs.to_big()) - eval(&r.coeffs, *j, &x)) / &cj;
            if r.coeffs[*j].is_positive() {
                if lo.as_ref().map_or(true, |l| bound > *l) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().map_or(true, |h| bound < *h) {
                hi = Some(bound);
            }
        }
        x[*j] = match (lo, hi) {
            (Some(l), _) => l,
            (None, Some(h)) => h,
            (None, None) => BigRational::zero(),
        };
    }
    for s in trace.substs.iter().rev() {
        let a = to_rat(&s.coeffs[s.var].to_big());
        x[s.var] = (to_rat(&s.rhs.to_big()) - eval(&s.coeffs, s.var, &x)) / a;
    }
    x
}

/// Whether the system has a rational solution.
pub fn feasible(nvars: usize, rows: &[Row]) -> bool {
    match solve::<i128>(nvars, rows, false) {
        Ok(r) => r.is_some(),
        Err(Overflow) => solve::<BigInt>(nvars, rows, false)
            .unwrap_or_else(|_| unreachable!())
            .is_some(),
    }
}

/// A rational solution, if one exists.
pub fn solution(nvars: usize, rows: &[Row]) -> Option<Vec<Scalar>> {
    let x = match solve::<i128>(nvars, rows, true) {
        Ok(None) => return None,
        Ok(Some(t)) => back_substitute(nvars, &t),
        Err(Overflow) => {
            let t = solve::<BigInt>(nvars, rows, true).unwrap_or_else(|_| unreachable!())?;
            back_substitute(nvars, &t)
        }
    };
    let out: Vec<Scalar> = x
        .iter()
        .map(|v| {
            let p = v.numer().to_i128().expect("witness numerator fits i128");
            let q = v.denom().to_i128().expect("witness denominator fits i128");
            Scalar::new(p, q)
        })
        .collect();
    debug_assert!(satisfies(rows, &out));
    Some(out)
}

/// Check a candidate solution exactly.
pub fn satisfies(rows: &[Row], x: &[Scalar]) -> bool {
    rows.iter().all(|r| {
        let lhs: Scalar = r
            .coeffs
            .iter()
            .zip(x)
            .map(|(&c, &v)| v.times(c))
            .sum();
        let rhs = Scalar::int(r.rhs);
        match r.rel {
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_interval() {
        // x >= 1, -x >= -3
        let rows = vec![Row::ge(vec![1], 1), Row::ge(vec![-1], -3)];
        assert!(feasible(1, &rows));
        let x = solution(1, &rows).unwrap();
        assert!(satisfies(&rows, &x));
        let bad = vec![Row::ge(vec![1], 4), Row::ge(vec![-1], -3)];
        assert!(!feasible(1, &bad));
    }

    #[test]
    fn equalities_and_fractions() {
        // 2x + y = 1, x - y >= 0, y >= 0  ->  y <= 1/3 feasible
        let rows = vec![
            Row::eq(vec![2, 1], 1),
            Row::ge(vec![1, -1], 0),
            Row::ge(vec![0, 1], 0),
        ];
        let x = solution(2, &rows).unwrap();
        assert!(satisfies(&rows, &x));
        // add y >= 1/2 (2y >= 1): infeasible
        let mut more = rows.clone();
        more.push(Row::ge(vec![0, 2], 1));
        assert!(!feasible(2, &more));
    }

    #[test]
    fn inconsistent_equalities() {
        let rows = vec![Row::eq(vec![1, 1], 1), Row::eq(vec![2, 2], 3)];
        assert!(!feasible(2, &rows));
    }

    #[test]
    fn three_variable_cycle() {
        // x - y >= 1, y - z >= 1, z - x >= -1  -> infeasible (sum 0 >= 1)
        let rows = vec![
            Row::ge(vec![1, -1, 0], 1),
            Row::ge(vec![0, 1, -1], 1),
            Row::ge(vec![-1, 0, 1], -1),
        ];
        assert!(!feasible(3, &rows));
        let ok = vec![
            Row::ge(vec![1, -1, 0], 1),
            Row::ge(vec![0, 1, -1], 1),
            Row::ge(vec![-1, 0, 1], -2),
        ];
        assert!(satisfies(&ok, &solution(3, &ok).unwrap()));
    }
}
