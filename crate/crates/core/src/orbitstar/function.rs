use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::arith::{fmt_q, Poly, ScalarQt, Q};
use crate::enveloping::{ChevalleyAlgebra, LeviSplit, UeaElement};
use crate::error::Result;

/// Commutative polynomial in the symbols `X[k, h]`, the matrix coefficients
/// `g -> beta_k(Ad_{g^-1} b_h)`, with coefficients rational in `t`.
///
/// Stored as polynomial numerators over one monic denominator, reduced so
/// that the representation is canonical.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrbitFunction {
    dim: usize,
    num: BTreeMap<Vec<u32>, Poly>,
    den: Poly,
}

impl OrbitFunction {
    pub fn zero(dim: usize) -> Self {
        OrbitFunction { dim, num: BTreeMap::new(), den: Poly::one() }
    }

    pub fn constant(dim: usize, c: &ScalarQt) -> Self {
        let mut num = BTreeMap::new();
        if !c.is_zero() {
            num.insert(Vec::new(), c.numer().clone());
        }
        OrbitFunction { dim, num, den: c.denom().clone() }.reduced()
    }

    pub fn one(dim: usize) -> Self {
        OrbitFunction::constant(dim, &ScalarQt::one())
    }

    /// The symbol `X[k, h]`.
    pub fn var(dim: usize, k: usize, h: usize) -> Self {
        let mut num = BTreeMap::new();
        num.insert(vec![(k * dim + h) as u32], Poly::one());
        OrbitFunction { dim, num, den: Poly::one() }
    }

    /// `X[beta, h]` for `beta` given in dual-basis coordinates.
    pub fn from_dual(dim: usize, beta: &[Q], h: usize) -> Self {
        let mut num = BTreeMap::new();
        for (k, c) in beta.iter().enumerate() {
            if !c.is_zero() {
                num.insert(vec![(k * dim + h) as u32], Poly::constant(c.clone()));
            }
        }
        OrbitFunction { dim, num, den: Poly::one() }
    }

    /// Builds a function from integer-free parts; used by tests and
    /// sampling. `terms` lists (coefficient, symbols as (k, h)).
    pub fn from_terms(dim: usize, terms: &[(Q, Vec<(usize, usize)>)]) -> Self {
        let mut f = OrbitFunction::zero(dim);
        for (c, vars) in terms {
            let mut m: Vec<u32> = vars.iter().map(|&(k, h)| (k * dim + h) as u32).collect();
            m.sort_unstable();
            add_poly(&mut f.num, m, &Poly::constant(c.clone()));
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    /// Monomials (sorted symbol ids `k * dim + h`) with their reduced
    /// coefficients.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, ScalarQt)> + '_ {
        self.num.iter().map(|(m, p)| (m, ScalarQt::new(p.clone(), self.den.clone())))
    }

    pub fn num_terms(&self) -> usize {
        self.num.len()
    }

    /// Polynomial degree in the symbols.
    pub fn degree(&self) -> usize {
        self.num.keys().map(|m| m.len()).max().unwrap_or(0)
    }

    pub fn symbol(&self, id: u32) -> (usize, usize) {
        (id as usize / self.dim, id as usize % self.dim)
    }

    fn reduced(mut self) -> Self {
        self.num.retain(|_, p| !p.is_zero());
        if self.num.is_empty() {
            self.den = Poly::one();
            return self;
        }
        if !self.den.is_one() {
            let mut g = self.den.clone();
            for p in self.num.values() {
                if g.is_one() {
                    break;
                }
                g = Poly::gcd(&g, p);
            }
            if !g.is_one() {
                self.den = self.den.exact_div(&g);
                for p in self.num.values_mut() {
                    *p = p.exact_div(&g);
                }
            }
        }
        let lead = self.den.leading().cloned().unwrap();
        if lead != Q::from_integer(1.into()) {
            let inv = lead.recip();
            self.den = self.den.scale(&inv);
            for p in self.num.values_mut() {
                *p = p.scale(&inv);
            }
        }
        self
    }

    pub fn add(&self, other: &OrbitFunction) -> OrbitFunction {
        self.combine(other, &Q::from_integer(1.into()))
    }

    pub fn sub(&self, other: &OrbitFunction) -> OrbitFunction {
        self.combine(other, &Q::from_integer((-1).into()))
    }

    fn combine(&self, other: &OrbitFunction, sign: &Q) -> OrbitFunction {
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let mut num = self.num.clone();
            for (m, p) in &other.num {
                add_poly(&mut num, m.clone(), &p.scale(sign));
            }
            return OrbitFunction { dim: self.dim, num, den: self.den.clone() }.reduced();
        }
        let g = Poly::gcd(&self.den, &other.den);
        let a = other.den.exact_div(&g);
        let b = self.den.exact_div(&g);
        let mut num: BTreeMap<Vec<u32>, Poly> = self.num.iter().map(|(m, p)| (m.clone(), p * &a)).collect();
        let bs = b.scale(sign);
        for (m, p) in &other.num {
            add_poly(&mut num, m.clone(), &(p * &bs));
        }
        OrbitFunction { dim: self.dim, num, den: &self.den * &a }.reduced()
    }

    pub fn mul(&self, other: &OrbitFunction) -> OrbitFunction {
        if self.is_zero() || other.is_zero() {
            return OrbitFunction::zero(self.dim);
        }
        let mut num: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
        for (m1, p1) in &self.num {
            for (m2, p2) in &other.num {
                add_poly(&mut num, merge(m1, m2), &(p1 * p2));
            }
        }
        OrbitFunction { dim: self.dim, num, den: &self.den * &other.den }.reduced()
    }

    pub fn scale(&self, c: &ScalarQt) -> OrbitFunction {
        if c.is_zero() {
            return OrbitFunction::zero(self.dim);
        }
        let num = self.num.iter().map(|(m, p)| (m.clone(), p * c.numer())).collect();
        OrbitFunction { dim: self.dim, num, den: &self.den * c.denom() }.reduced()
    }

    /// Coefficient of `t^k` in the expansion at `t = 0`.
    pub fn taylor(&self, k: usize) -> Result<OrbitFunction> {
        let mut out = OrbitFunction::zero(self.dim);
        for (m, c) in self.terms() {
            let s = c.series(k)?;
            add_poly(&mut out.num, m.clone(), &Poly::constant(s[k].clone()));
        }
        Ok(out.reduced())
    }

    /// Whether every coefficient vanishes at `t = 0`.
    pub fn divisible_by_t(&self) -> bool {
        self.terms().all(|(_, c)| c.valuation().is_some_and(|v| v >= 1))
    }

    pub(crate) fn num_map(&self) -> &BTreeMap<Vec<u32>, Poly> {
        &self.num
    }

    /// Numerators rewritten over `den`, which the own denominator must
    /// divide.
    pub(crate) fn numerators_over(&self, den: &Poly) -> BTreeMap<Vec<u32>, Poly> {
        if &self.den == den {
            return self.num.clone();
        }
        let k = den.exact_div(&self.den);
        self.num.iter().map(|(m, p)| (m.clone(), p * &k)).collect()
    }

    pub(crate) fn from_parts(dim: usize, num: BTreeMap<Vec<u32>, Poly>, den: Poly) -> Self {
        OrbitFunction { dim, num, den }.reduced()
    }

    pub fn render(&self, alg: &ChevalleyAlgebra) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(m, c)| {
                let syms: Vec<String> = m
                    .iter()
                    .map(|&id| {
                        let (k, h) = self.symbol(id);
                        format!("X[{},{}]", alg.basis_name(k), alg.basis_name(h))
                    })
                    .collect();
                let coeff = if c.denom().is_one() && c.numer().degree() == Some(0) { fmt_q(&c.numer().coeff(0)) } else { format!("({c})") };
                if syms.is_empty() {
                    coeff
                } else {
                    format!("{coeff}*{}", syms.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for OrbitFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms().map(|(m, c)| format!("({c}){m:?}")).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `acc += a * b` on raw numerator maps.
pub(crate) fn mul_accumulate(acc: &mut BTreeMap<Vec<u32>, Poly>, a: &BTreeMap<Vec<u32>, Poly>, b: &BTreeMap<Vec<u32>, Poly>) {
    for (m1, p1) in a {
        for (m2, p2) in b {
            add_poly(acc, merge(m1, m2), &(p1 * p2));
        }
    }
}

pub(crate) fn add_poly(map: &mut BTreeMap<Vec<u32>, Poly>, m: Vec<u32>, p: &Poly) {
    if p.is_zero() {
        return;
    }
    let slot = map.entry(m).or_default();
    slot.add_assign_ref(p);
    // zero entries are dropped by `reduced`
}

fn merge(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Left-invariant derivations of the symbol algebra.
///
/// A basis element `b_a` sends `X[k, h]` to `X[b_a . beta_k, h]` with the
/// coadjoint action `(x . beta)(u) = -beta([x, u])`.
#[derive(Clone, Debug)]
pub struct Action {
    dim: usize,
    /// `table[a][k]`: `b_a . beta_k` in dual coordinates.
    table: Vec<Vec<Vec<(usize, Q)>>>,
    /// Height of the weight of each basis element (signed).
    weight_height: Vec<i64>,
    theta_height: i64,
}

impl Action {
    pub fn new(alg: &ChevalleyAlgebra) -> Self {
        let dim = alg.dim();
        let mut table = vec![vec![Vec::new(); dim]; dim];
        for (a, row) in table.iter_mut().enumerate() {
            for m in 0..dim {
                for (k, c) in alg.bracket(a, m) {
                    row[*k].push((m, -c));
                }
            }
        }
        let weight_height = (0..dim).map(|b| alg.weight(b).iter().sum()).collect();
        let theta_height = alg.root_system().highest_root().height() as i64;
        Action { dim, table, weight_height, theta_height }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `b_a . f` as a derivation.
    pub fn apply_basis(&self, a: usize, f: &OrbitFunction) -> OrbitFunction {
        let dim = self.dim;
        let mut num: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
        for (m, p) in f.num_map() {
            for (pos, &id) in m.iter().enumerate() {
                if pos > 0 && m[pos - 1] == id {
                    // repeated symbol: handled with multiplicity below
                    continue;
                }
                let mult = m.iter().filter(|&&x| x == id).count() as i64;
                let (k, h) = (id as usize / dim, id as usize % dim);
                let mut rest = m.clone();
                rest.remove(pos);
                for (kk, c) in &self.table[a][k] {
                    let nid = (*kk * dim + h) as u32;
                    let mut nm = rest.clone();
                    let at = nm.partition_point(|&x| x < nid);
                    nm.insert(at, nid);
                    add_poly(&mut num, nm, &p.scale(&(c * Q::from_integer(mult.into()))));
                }
            }
        }
        OrbitFunction::from_parts(dim, num, f.denominator().clone())
    }

    /// Action of a word: the rightmost letter acts first.
    pub fn apply_word(&self, word: &[u8], f: &OrbitFunction) -> OrbitFunction {
        let mut g = f.clone();
        for &b in word.iter().rev() {
            if g.is_zero() {
                break;
            }
            g = self.apply_basis(b as usize, &g);
        }
        g
    }

    pub fn act(&self, u: &UeaElement, f: &OrbitFunction) -> OrbitFunction {
        let mut out = OrbitFunction::zero(self.dim);
        for (m, c) in u.terms() {
            out = out.add(&self.apply_word(m, f).scale(&ScalarQt::from_q(c.clone())));
        }
        out
    }

    /// Largest height of `U(n-)` degrees that can act nontrivially.
    pub fn lowering_capacity(&self, f: &OrbitFunction) -> u32 {
        self.capacity(f, -1)
    }

    /// Largest height of `U(n+)` degrees that can act nontrivially.
    pub fn raising_capacity(&self, f: &OrbitFunction) -> u32 {
        self.capacity(f, 1)
    }

    fn capacity(&self, f: &OrbitFunction, sign: i64) -> u32 {
        f.num_map()
            .keys()
            .map(|m| {
                m.iter()
                    .map(|&id| {
                        let k = id as usize / self.dim;
                        // beta_k has weight -wt(b_k)
                        (self.theta_height + sign * self.weight_height[k]).max(0)
                    })
                    .sum::<i64>() as u32
            })
            .max()
            .unwrap_or(0)
    }
}

/// `f_h = X[lambda, h]`, the pullback of the linear function `h` on the
/// orbit.
pub fn momentum_function(split: &LeviSplit, h: usize) -> OrbitFunction {
    let alg = split.algebra();
    let lambda: Vec<Q> = (0..alg.dim()).map(|b| split.lambda_on(b)).collect();
    OrbitFunction::from_dual(alg.dim(), &lambda, h)
}
