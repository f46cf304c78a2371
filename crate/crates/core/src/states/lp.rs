//! Exact two-phase simplex over the rationals with Bland's rule.
//!
//! Problems have the form `max c·x` subject to `A x = b`, `x ≥ 0`. Pivots
//! run on `i128` fractions with overflow checks first and restart on
//! arbitrary-precision rationals when a value leaves that range.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::rational::{self, Q};

#[derive(Debug, Clone)]
pub struct LinearProgram {
    /// Dense rows of `A`.
    pub rows: Vec<Vec<Q>>,
    pub rhs: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Q, x: Vec<Q> },
    Infeasible,
}

/// Field operations that may refuse (overflow).
trait Field: Clone + PartialOrd + Sized {
    fn from_q(q: &Q) -> Option<Self>;
    fn to_q(&self) -> Q;
    fn f_zero() -> Self;
    fn f_one() -> Self;
    fn f_is_zero(&self) -> bool;
    fn f_is_neg(&self) -> bool;
    fn f_is_pos(&self) -> bool;
    fn f_neg(&self) -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div(&self, o: &Self) -> Option<Self>;
}

type Small = Ratio<i128>;

impl Field for Small {
    fn from_q(q: &Q) -> Option<Self> {
        Some(Small::new_raw(q.numer().to_i128()?, q.denom().to_i128()?))
    }
    fn to_q(&self) -> Q {
        Q::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
    fn f_zero() -> Self {
        Zero::zero()
    }
    fn f_one() -> Self {
        One::one()
    }
    fn f_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn f_is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn f_is_pos(&self) -> bool {
        Signed::is_positive(self)
    }
    fn f_neg(&self) -> Self {
        -*self
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        self.checked_div(o)
    }
}

impl Field for Q {
    fn from_q(q: &Q) -> Option<Self> {
        Some(q.clone())
    }
    fn to_q(&self) -> Q {
        self.clone()
    }
    fn f_zero() -> Self {
        Zero::zero()
    }
    fn f_one() -> Self {
        One::one()
    }
    fn f_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn f_is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn f_is_pos(&self) -> bool {
        Signed::is_positive(self)
    }
    fn f_neg(&self) -> Self {
        -self.clone()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
}

/// Overflow marker for the `i128` pass.
struct Overflow;

type Step<T> = std::result::Result<T, Overflow>;

fn ok<T>(v: Option<T>) -> Step<T> {
    v.ok_or(Overflow)
}

#[derive(Debug, Clone)]
struct Tableau<T> {
    /// `m` constraint rows followed by the objective row; last column is the rhs.
    t: Vec<Vec<T>>,
    basis: Vec<usize>,
    cols: usize,
}

impl<T: Field> Tableau<T> {
    fn m(&self) -> usize {
        self.basis.len()
    }

    fn pivot(&mut self, r: usize, c: usize) -> Step<()> {
        let p = self.t[r][c].clone();
        for v in self.t[r].iter_mut() {
            if !v.f_is_zero() {
                *v = ok(v.div(&p))?;
            }
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].f_is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.f_is_zero() {
                    *v = ok(v.sub(&ok(f.mul(pv))?))?;
                }
            }
        }
        self.basis[r] = c;
        Ok(())
    }

    /// Maximizes the objective row (stored as reduced costs `z_j - c_j`)
    /// over columns `0..allowed`. Returns false if unbounded.
    fn run(&mut self, allowed: usize) -> Step<bool> {
        let m = self.m();
        loop {
            // Bland: lowest-index column with negative reduced cost enters.
            let Some(c) = (0..allowed).find(|&j| self.t[m][j].f_is_neg()) else {
                return Ok(true);
            };
            let mut best: Option<(usize, T)> = None;
            for r in 0..m {
                let a = &self.t[r][c];
                if a.f_is_pos() {
                    let ratio = ok(self.t[r][self.cols].div(a))?;
                    let better = match &best {
                        None => true,
                        Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                    };
                    if better {
                        best = Some((r, ratio));
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c)?,
                None => return Ok(false),
            }
        }
    }

    /// Phase one with one artificial per row. Rows left with an artificial
    /// in the basis and no nonzero original entry are redundant and dropped.
    fn phase_one(rows: &[Vec<Q>], rhs: &[Q], n: usize) -> Step<Option<Self>> {
        let m = rows.len();
        let cols = n + m;
        let mut t: Vec<Vec<T>> = Vec::with_capacity(m + 1);
        for (i, (row, b)) in rows.iter().zip(rhs).enumerate() {
            let neg = b.f_is_neg();
            let mut r = Vec::with_capacity(cols + 1);
            for v in row {
                let v = ok(T::from_q(v))?;
                r.push(if neg { v.f_neg() } else { v });
            }
            r.extend((0..m).map(|k| if k == i { T::f_one() } else { T::f_zero() }));
            let b = ok(T::from_q(b))?;
            r.push(if neg { b.f_neg() } else { b });
            t.push(r);
        }
        // Maximize -Σ artificials: reduced costs are minus the column sums.
        let mut obj = vec![T::f_zero(); cols + 1];
        for r in &t {
            for j in (0..n).chain([cols]) {
                obj[j] = ok(obj[j].sub(&r[j]))?;
            }
        }
        t.push(obj);
        let mut tab = Tableau {
            t,
            basis: (n..n + m).collect(),
            cols,
        };
        tab.run(cols)?;
        if !tab.t[m][cols].f_is_zero() {
            return Ok(None);
        }
        // Drive artificials out of the basis or drop their rows.
        let mut r = 0;
        while r < tab.m() {
            if tab.basis[r] >= n {
                if let Some(c) = (0..n).find(|&j| !tab.t[r][j].f_is_zero()) {
                    tab.pivot(r, c)?;
                    r += 1;
                } else {
                    tab.t.remove(r);
                    tab.basis.remove(r);
                }
            } else {
                r += 1;
            }
        }
        // Artificial columns are dead from here on.
        for row in tab.t.iter_mut() {
            row.drain(n..cols);
        }
        tab.cols = n;
        Ok(Some(tab))
    }

    fn phase_two(&self, objective: &[Q]) -> Step<Option<(Q, Vec<Q>)>> {
        let n = objective.len();
        let mut tab = self.clone();
        let m = tab.m();
        let c: Vec<T> = objective.iter().map(|q| ok(T::from_q(q))).collect::<Step<_>>()?;
        // Objective row: reduced costs z_j - c_j for the current basis.
        let mut obj: Vec<T> = c.iter().map(T::f_neg).chain([T::f_zero()]).collect();
        for r in 0..m {
            let b = tab.basis[r];
            if b < n && !c[b].f_is_zero() {
                for (o, v) in obj.iter_mut().zip(&tab.t[r]) {
                    if !v.f_is_zero() {
                        *o = ok(o.add(&ok(c[b].mul(v))?))?;
                    }
                }
            }
        }
        tab.t[m] = obj;
        if !tab.run(n)? {
            return Ok(None);
        }
        let mut x = vec![rational::zero(); n];
        for r in 0..m {
            if tab.basis[r] < n {
                x[tab.basis[r]] = tab.t[r][tab.cols].to_q();
            }
        }
        let value = objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(Some((value, x)))
    }
}

impl LinearProgram {
    pub fn new(rows: Vec<Vec<Q>>, rhs: Vec<Q>) -> Self {
        LinearProgram { rows, rhs }
    }

    pub fn vars(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// `max objective·x` over the feasible set.
    pub fn maximize(&self, objective: &[Q]) -> Result<LpOutcome> {
        self.prepare()?.maximize(objective)
    }

    /// Runs phase one once so several objectives can share the feasible basis.
    pub fn prepare(&self) -> Result<PreparedProgram> {
        let n = self.vars();
        if self.rows.iter().any(|r| r.len() != n) || self.rows.len() != self.rhs.len() {
            return Err(Error::Domain("rows have different lengths".into()));
        }
        Ok(PreparedProgram {
            n,
            small: Tableau::phase_one(&self.rows, &self.rhs, n).ok(),
            big: OnceLock::new(),
            lp: self.clone(),
        })
    }

    /// Some feasible point, or `None`.
    pub fn feasible_point(&self) -> Result<Option<Vec<Q>>> {
        let zero = vec![rational::zero(); self.vars()];
        Ok(match self.maximize(&zero)? {
            LpOutcome::Optimal { x, .. } => Some(x),
            LpOutcome::Infeasible => None,
        })
    }
}

/// A linear program after phase one.
#[derive(Debug, Clone)]
pub struct PreparedProgram {
    n: usize,
    lp: LinearProgram,
    /// `None` if phase one overflowed `i128`; `Some(None)` if infeasible.
    small: Option<Option<Tableau<Small>>>,
    big: OnceLock<Option<Tableau<Q>>>,
}

impl PreparedProgram {
    fn big(&self) -> &Option<Tableau<Q>> {
        self.big.get_or_init(|| match Tableau::phase_one(&self.lp.rows, &self.lp.rhs, self.n) {
            Ok(t) => t,
            Err(Overflow) => unreachable!("exact rationals do not overflow"),
        })
    }

    pub fn is_feasible(&self) -> bool {
        match &self.small {
            Some(t) => t.is_some(),
            None => self.big().is_some(),
        }
    }

    /// `max objective·x`, starting from the stored feasible basis.
    pub fn maximize(&self, objective: &[Q]) -> Result<LpOutcome> {
        if objective.len() != self.n {
            return Err(Error::Domain("objective length differs from the variable count".into()));
        }
        let solved = match &self.small {
            Some(None) => return Ok(LpOutcome::Infeasible),
            Some(Some(t)) => t.phase_two(objective).ok(),
            None => None,
        };
        let solved = match solved {
            Some(s) => s,
            None => match self.big() {
                None => return Ok(LpOutcome::Infeasible),
                Some(t) => match t.phase_two(objective) {
                    Ok(s) => s,
                    Err(Overflow) => unreachable!("exact rationals do not overflow"),
                },
            },
        };
        match solved {
            Some((value, x)) => Ok(LpOutcome::Optimal { value, x }),
            None => Err(Error::Internal("linear program is unbounded".into())),
        }
    }
}

/// Rank of a rational matrix by exact Gaussian elimination.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut a: Vec<Vec<Q>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank].clone();
        for r in 0..a.len() {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] / &pivot[c];
                for (v, pv) in a[r].iter_mut().zip(&pivot) {
                    if !pv.is_zero() {
                        *v -= &f * pv;
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}
