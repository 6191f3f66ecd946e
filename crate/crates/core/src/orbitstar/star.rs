use std::collections::{BTreeMap, HashMap};

use crate::arith::{Poly, ScalarQt};
use crate::enveloping::{LeviSplit, Monomial};
use crate::error::{Error, Result};
use crate::shapovalov::TwoTensor;

use super::function::{add_poly, mul_accumulate, Action, OrbitFunction};

struct Block {
    height: u32,
    rows: Vec<Monomial>,
    cols: Vec<Monomial>,
    /// Coefficient numerators over the common denominator.
    num: Vec<Vec<Poly>>,
}

/// `f * g = m(B . (f (x) g))` with `B` brought to a common denominator.
pub struct StarProduct {
    action: Action,
    cutoff: u32,
    den: Poly,
    blocks: Vec<Block>,
}

impl StarProduct {
    pub fn new(b: &TwoTensor) -> Self {
        let mut den = Poly::one();
        for blk in b.blocks() {
            for c in blk.coeffs.iter().flatten() {
                if !c.denom().is_one() {
                    let g = Poly::gcd(&den, c.denom());
                    den = (&den * c.denom()).exact_div(&g);
                }
            }
        }
        let blocks = b
            .blocks()
            .iter()
            .map(|blk| Block {
                height: blk.degree.height(),
                rows: blk.rows.clone(),
                cols: blk.cols.clone(),
                num: blk
                    .coeffs
                    .iter()
                    .map(|row| row.iter().map(|c| (c.numer() * &den).exact_div(c.denom())).collect())
                    .collect(),
            })
            .collect();
        StarProduct { action: Action::new(b.algebra()), cutoff: b.height_cutoff(), den, blocks }
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    /// Highest degree of `B` the product of `f` and `g` can see: beyond it
    /// either `U(n-)` kills `f` or `U(n+)` kills `g`.
    pub fn required_height(&self, f: &OrbitFunction, g: &OrbitFunction) -> u32 {
        self.action.lowering_capacity(f).min(self.action.raising_capacity(g))
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn star(&self, f: &OrbitFunction, g: &OrbitFunction) -> Result<OrbitFunction> {
        self.star_window(f, g, self.required_height(f, g))
    }

    /// The product using every degree of `B` up to `height`, which must
    /// cover the required window.
    pub fn star_window(&self, f: &OrbitFunction, g: &OrbitFunction, height: u32) -> Result<OrbitFunction> {
        let dim = self.action.dim();
        let need = self.required_height(f, g).max(height);
        if need > self.cutoff {
            return Err(Error::Cutoff { have: self.cutoff, need });
        }
        let mut acc: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
        let (mut fmemo, mut gmemo) = (HashMap::new(), HashMap::new());
        for blk in self.blocks.iter().filter(|b| b.height <= need) {
            let ys: Vec<_> = blk
                .cols
                .iter()
                .map(|y| self.word_action(y, g, &mut gmemo).numerators_over(g.denominator()))
                .collect();
            if ys.iter().all(|y| y.is_empty()) {
                continue;
            }
            for (i, x) in blk.rows.iter().enumerate() {
                let xf = self.word_action(x, f, &mut fmemo);
                if xf.is_zero() {
                    continue;
                }
                let mut z: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
                for (j, yg) in ys.iter().enumerate() {
                    let c = &blk.num[i][j];
                    if c.is_zero() {
                        continue;
                    }
                    for (m, p) in yg {
                        add_poly(&mut z, m.clone(), &(p * c));
                    }
                }
                mul_accumulate(&mut acc, &xf.numerators_over(f.denominator()), &z);
            }
        }
        let den = &(f.denominator() * g.denominator()) * &self.den;
        Ok(OrbitFunction::from_parts(dim, acc, den))
    }

    /// `word . f`, sharing suffixes across the words of all blocks.
    fn word_action(&self, word: &[u8], f: &OrbitFunction, memo: &mut HashMap<Vec<u8>, OrbitFunction>) -> OrbitFunction {
        if word.is_empty() {
            return f.clone();
        }
        if let Some(v) = memo.get(word) {
            return v.clone();
        }
        let inner = self.word_action(&word[1..], f, memo);
        let v = if inner.is_zero() { inner } else { self.action.apply_basis(word[0] as usize, &inner) };
        memo.insert(word.to_vec(), v.clone());
        v
    }
}

/// `{f, g} = sum_alpha (f_alpha . f)(e_alpha . g) - (e_alpha . f)(f_alpha . g)`
/// over the positive half of the split.
pub fn poisson(split: &LeviSplit, action: &Action, f: &OrbitFunction, g: &OrbitFunction) -> OrbitFunction {
    let alg = split.algebra();
    let mut out = OrbitFunction::zero(alg.dim());
    for &k in split.delta_plus() {
        let (fa, ea) = (alg.f(k), alg.e(k));
        let a = action.apply_basis(fa, f).mul(&action.apply_basis(ea, g));
        let b = action.apply_basis(ea, f).mul(&action.apply_basis(fa, g));
        out = out.add(&a).sub(&b);
    }
    out
}

/// The composition formula with one momentum function on the right:
/// `f f_h + t sum_alpha (f_alpha . f)(e_alpha . f_h)`, with `sign` scaling
/// the first-order term.
pub fn composition_rhs(split: &LeviSplit, action: &Action, f: &OrbitFunction, fh: &OrbitFunction, sign: i64) -> OrbitFunction {
    let alg = split.algebra();
    let mut first = OrbitFunction::zero(alg.dim());
    for &k in split.delta_plus() {
        first = first.add(&action.apply_basis(alg.f(k), f).mul(&action.apply_basis(alg.e(k), fh)));
    }
    let t = ScalarQt::t_power(crate::arith::q(sign), 1);
    f.mul(fh).add(&first.scale(&t))
}
