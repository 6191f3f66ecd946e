//! Chevalley bases with exact structure constants.
//!
//! The algebra is realized inside `gl(N)` from explicit Chevalley
//! generators `e_i, f_i`; root vectors for non-simple roots are nested
//! brackets divided by `p + 1`, which yields integral structure constants.
//! The matrices are only used during construction.

use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{q, solve, Q};
use crate::error::{Error, Result};
use crate::rootsys::{DegreeVector, RootSystem, Series};

#[derive(Clone, PartialEq)]
struct Mat {
    n: usize,
    a: Vec<Q>,
}

impl Mat {
    fn zero(n: usize) -> Self {
        Mat { n, a: vec![Q::zero(); n * n] }
    }

    fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Mat::zero(n);
        m.a[i * n + j] = Q::one();
        m
    }

    fn get(&self, i: usize, j: usize) -> &Q {
        &self.a[i * self.n + j]
    }

    fn is_zero(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }

    fn add(&self, o: &Mat) -> Mat {
        Mat { n: self.n, a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect() }
    }

    fn sub(&self, o: &Mat) -> Mat {
        Mat { n: self.n, a: self.a.iter().zip(&o.a).map(|(x, y)| x - y).collect() }
    }

    fn scale(&self, c: &Q) -> Mat {
        Mat { n: self.n, a: self.a.iter().map(|x| x * c).collect() }
    }

    fn transpose(&self) -> Mat {
        let n = self.n;
        let mut m = Mat::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.a[j * n + i] = self.get(i, j).clone();
            }
        }
        m
    }

    fn mul(&self, o: &Mat) -> Mat {
        let n = self.n;
        let mut m = Mat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let y = o.get(k, j);
                    if !y.is_zero() {
                        m.a[i * n + j] += x * y;
                    }
                }
            }
        }
        m
    }

    fn bracket(&self, o: &Mat) -> Mat {
        self.mul(o).sub(&o.mul(self))
    }

    /// `c` with `self = c * basis`, if one exists.
    fn ratio(&self, basis: &Mat) -> Option<Q> {
        let k = basis.a.iter().position(|x| !x.is_zero())?;
        let c = &self.a[k] / &basis.a[k];
        (self.sub(&basis.scale(&c)).is_zero()).then_some(c)
    }
}

/// Chevalley generators `(e_i, f_i)` in a faithful matrix representation.
fn generators(series: Series, rank: usize) -> Result<(Vec<Mat>, Vec<Mat>)> {
    let n = rank;
    let classical = |size: usize, last: &dyn Fn(usize) -> (Mat, Mat)| {
        let bar = |i: usize| size - 1 - i;
        let mut es = Vec::new();
        let mut fs = Vec::new();
        for i in 0..n - 1 {
            let e = Mat::unit(size, i, i + 1).sub(&Mat::unit(size, bar(i + 1), bar(i)));
            fs.push(e.transpose());
            es.push(e);
        }
        let (e, f) = last(size);
        es.push(e);
        fs.push(f);
        (es, fs)
    };
    match series {
        Series::A => {
            let size = n + 1;
            let es: Vec<Mat> = (0..n).map(|i| Mat::unit(size, i, i + 1)).collect();
            let fs = es.iter().map(Mat::transpose).collect();
            Ok((es, fs))
        }
        Series::B if n >= 2 => Ok(classical(2 * n + 1, &|size| {
            let e = Mat::unit(size, n - 1, n).sub(&Mat::unit(size, n, n + 1));
            let f = e.transpose().scale(&q(2));
            (e, f)
        })),
        Series::C if n >= 2 => Ok(classical(2 * n, &|size| {
            let e = Mat::unit(size, n - 1, n);
            let f = e.transpose();
            (e, f)
        })),
        Series::D if n >= 4 => Ok(classical(2 * n, &|size| {
            let e = Mat::unit(size, n - 2, n).sub(&Mat::unit(size, n - 1, n + 1));
            let f = e.transpose();
            (e, f)
        })),
        Series::G if n == 2 => {
            // G2 inside so(7): short generator e_1 + e_3, long generator e_2 of B3
            let (be, bf) = generators(Series::B, 3)?;
            Ok((vec![be[0].add(&be[2]), be[1].clone()], vec![bf[0].add(&bf[2]), bf[1].clone()]))
        }
        _ => Err(Error::UnsupportedType { series: series.letter(), rank }),
    }
}

/// Kind of a basis element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// `f_alpha = e_{-alpha}` for the positive root with this index.
    F(usize),
    /// Simple coroot `h_i`.
    H(usize),
    /// `e_alpha` for the positive root with this index.
    E(usize),
}

/// Sparse linear combination of basis elements.
pub type Combo = Vec<(usize, Q)>;

#[derive(Clone)]
pub struct ChevalleyAlgebra {
    rs: RootSystem,
    dim: usize,
    /// `brackets[a][b]` is `[b_a, b_b]` in the basis.
    brackets: Vec<Vec<Combo>>,
    /// `H_alpha` (coroot of positive root k) in the `h_i`.
    coroots: Vec<Vec<Q>>,
}

impl fmt::Debug for ChevalleyAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChevalleyAlgebra({}, dim {})", self.rs.name(), self.dim)
    }
}

impl ChevalleyAlgebra {
    pub fn new(rs: &RootSystem) -> Result<Self> {
        let rank = rs.rank();
        let (es, fs) = generators(rs.series(), rank)?;
        let hs: Vec<Mat> = es.iter().zip(&fs).map(|(e, f)| e.bracket(f)).collect();
        let cartan = rs.cartan();
        for i in 0..rank {
            for j in 0..rank {
                let expect = q(cartan[j][i]);
                if es[j].scale(&expect) != hs[i].bracket(&es[j]) || fs[j].scale(&-&expect) != hs[i].bracket(&fs[j]) {
                    return Err(Error::Consistency(format!("generator realization of {} has wrong Cartan data", rs.name())));
                }
                if i != j && !es[i].bracket(&fs[j]).is_zero() {
                    return Err(Error::Consistency("[e_i, f_j] != 0 for i != j".into()));
                }
            }
        }

        let roots = rs.positive_roots();
        let npos = roots.len();
        let rank_d = |r: &DegreeVector| rs.pair(&r.to_weight(), &r.to_weight());
        let mut epos: Vec<Mat> = Vec::with_capacity(npos);
        let mut fpos: Vec<Mat> = Vec::with_capacity(npos);
        let mut coroots: Vec<Vec<Q>> = Vec::with_capacity(npos);
        for root in roots {
            let len2 = rank_d(root);
            let coroot: Vec<Q> = (0..rank)
                .map(|i| q(root.coeffs()[i] as i64) * &rs.form_matrix()[i][i] / &len2)
                .collect();
            let hmat = coroot.iter().zip(&hs).fold(Mat::zero(hs[0].n), |acc, (c, h)| acc.add(&h.scale(c)));
            let (e, f0) = if root.height() == 1 {
                let i = root.coeffs().iter().position(|&c| c == 1).unwrap();
                (es[i].clone(), fs[i].clone())
            } else {
                let (i, beta) = (0..rank)
                    .find_map(|i| {
                        let b = root.checked_sub(&DegreeVector::simple(rank, i))?;
                        rs.root_index(&b).map(|k| (i, k))
                    })
                    .ok_or_else(|| Error::Consistency(format!("root {root} has no predecessor")))?;
                let simple = DegreeVector::simple(rank, i);
                let mut p = 0i64;
                let mut cur = roots[beta].clone();
                while let Some(next) = cur.checked_sub(&simple) {
                    if !rs.is_positive_root(&next) {
                        break;
                    }
                    p += 1;
                    cur = next;
                }
                let div = q(p + 1).recip();
                (es[i].bracket(&epos[beta]).scale(&div), fs[i].bracket(&fpos[beta]).scale(&div))
            };
            let c = e.bracket(&f0).ratio(&hmat).filter(|c| !c.is_zero()).ok_or_else(|| {
                Error::Consistency(format!("[e, f] is not proportional to the coroot for {root}"))
            })?;
            epos.push(e);
            fpos.push(f0.scale(&c.recip()));
            coroots.push(coroot);
        }

        let dim = 2 * npos + rank;
        let mats: Vec<Mat> = fpos.into_iter().chain(hs.iter().cloned()).chain(epos).collect();
        let mut alg = ChevalleyAlgebra { rs: rs.clone(), dim, brackets: Vec::new(), coroots };
        let hidx: Vec<usize> = (0..rank).map(|i| alg.h(i)).collect();
        let mut brackets = vec![vec![Vec::new(); dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                if b < a {
                    brackets[a][b] = brackets[b][a].iter().map(|(k, c)| (*k, -c)).collect();
                    continue;
                }
                let m = mats[a].bracket(&mats[b]);
                if m.is_zero() {
                    continue;
                }
                let w = alg.weight_add(a, b);
                let combo: Combo = match w {
                    Some(WeightClass::Zero) => {
                        // solve over diagonal entries
                        let n = m.n;
                        let rows: Vec<Vec<Q>> =
                            (0..n).map(|d| hidx.iter().map(|&h| mats[h].get(d, d).clone()).collect()).collect();
                        let rhs: Vec<Q> = (0..n).map(|d| m.get(d, d).clone()).collect();
                        let coeffs = least_squares_exact(&rows, &rhs)
                            .ok_or_else(|| Error::Consistency("bracket lands outside the Cartan".into()))?;
                        let combo: Combo =
                            hidx.iter().zip(coeffs).filter(|(_, c)| !c.is_zero()).map(|(&h, c)| (h, c)).collect();
                        let back = combo.iter().fold(Mat::zero(n), |acc, (h, c)| acc.add(&mats[*h].scale(c)));
                        if back != m {
                            return Err(Error::Consistency("bracket lands outside the Cartan".into()));
                        }
                        combo
                    }
                    Some(WeightClass::Basis(k)) => {
                        let c = m.ratio(&mats[k]).ok_or_else(|| Error::Consistency("bracket not in root space".into()))?;
                        vec![(k, c)]
                    }
                    None => return Err(Error::Consistency("nonzero bracket with non-root weight".into())),
                };
                brackets[a][b] = combo;
            }
        }
        alg.brackets = brackets;
        alg.check_invariants()?;
        Ok(alg)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn num_positive(&self) -> usize {
        self.rs.positive_roots().len()
    }

    pub fn f(&self, k: usize) -> usize {
        k
    }

    pub fn h(&self, i: usize) -> usize {
        self.num_positive() + i
    }

    pub fn e(&self, k: usize) -> usize {
        self.num_positive() + self.rank() + k
    }

    pub fn kind(&self, b: usize) -> BasisKind {
        let p = self.num_positive();
        let r = self.rank();
        if b < p {
            BasisKind::F(b)
        } else if b < p + r {
            BasisKind::H(b - p)
        } else {
            BasisKind::E(b - p - r)
        }
    }

    /// Root-lattice weight of a basis element as signed coordinates.
    pub fn weight(&self, b: usize) -> Vec<i64> {
        let r = self.rank();
        match self.kind(b) {
            BasisKind::H(_) => vec![0; r],
            BasisKind::E(k) => self.rs.positive_roots()[k].coeffs().iter().map(|&c| c as i64).collect(),
            BasisKind::F(k) => self.rs.positive_roots()[k].coeffs().iter().map(|&c| -(c as i64)).collect(),
        }
    }

    fn weight_add(&self, a: usize, b: usize) -> Option<WeightClass> {
        let w: Vec<i64> = self.weight(a).iter().zip(self.weight(b)).map(|(x, y)| x + y).collect();
        self.basis_of_weight(&w)
    }

    fn basis_of_weight(&self, w: &[i64]) -> Option<WeightClass> {
        if w.iter().all(|&c| c == 0) {
            return Some(WeightClass::Zero);
        }
        let pos = w.iter().all(|&c| c >= 0);
        let neg = w.iter().all(|&c| c <= 0);
        if !pos && !neg {
            return None;
        }
        let dv = DegreeVector::new(w.iter().map(|c| c.unsigned_abs() as u32).collect());
        let k = self.rs.root_index(&dv)?;
        Some(WeightClass::Basis(if pos { self.e(k) } else { self.f(k) }))
    }

    pub fn bracket(&self, a: usize, b: usize) -> &Combo {
        &self.brackets[a][b]
    }

    /// Bracket of two arbitrary elements given as dense coordinate vectors.
    pub fn bracket_vec(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let c = xa * yb;
                for (k, s) in &self.brackets[a][b] {
                    out[*k] += &c * s;
                }
            }
        }
        out
    }

    /// Coadjoint action on dual coordinates: `(x . beta)(b_m) = -beta([x, b_m])`.
    pub fn coadjoint(&self, x: usize, beta: &[Q]) -> Vec<Q> {
        (0..self.dim)
            .map(|m| -self.brackets[x][m].iter().map(|(k, c)| c * &beta[*k]).sum::<Q>())
            .collect()
    }

    /// Coroot `H_alpha` of positive root `k` in the `h_i` basis.
    pub fn coroot(&self, k: usize) -> &[Q] {
        &self.coroots[k]
    }

    /// Matrix of `ad(b)`: `ad[row][col]` is the `row` coefficient of `[b, b_col]`.
    pub fn ad_matrix(&self, b: usize) -> Vec<Vec<Q>> {
        let mut m = vec![vec![Q::zero(); self.dim]; self.dim];
        for col in 0..self.dim {
            for (k, c) in &self.brackets[b][col] {
                m[*k][col] = c.clone();
            }
        }
        m
    }

    /// Killing form `tr(ad x ad y)` on basis elements.
    pub fn killing_form(&self) -> Vec<Vec<Q>> {
        let ads: Vec<Vec<Vec<Q>>> = (0..self.dim).map(|b| self.ad_matrix(b)).collect();
        let mut k = vec![vec![Q::zero(); self.dim]; self.dim];
        for a in 0..self.dim {
            for b in a..self.dim {
                let mut tr = Q::zero();
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        if !ads[a][i][j].is_zero() && !ads[b][j][i].is_zero() {
                            tr += &ads[a][i][j] * &ads[b][j][i];
                        }
                    }
                }
                k[a][b] = tr.clone();
                k[b][a] = tr;
            }
        }
        k
    }

    /// New algebra over the rescaled basis `b'_i = s_i b_i`.
    pub fn rescaled(&self, scales: &[Q]) -> ChevalleyAlgebra {
        assert_eq!(scales.len(), self.dim);
        let mut out = self.clone();
        for a in 0..self.dim {
            for b in 0..self.dim {
                out.brackets[a][b] = self.brackets[a][b]
                    .iter()
                    .map(|(k, c)| (*k, c * &scales[a] * &scales[b] / &scales[*k]))
                    .collect();
            }
        }
        out
    }

    pub fn basis_name(&self, b: usize) -> String {
        match self.kind(b) {
            BasisKind::F(k) => format!("f{}", k + 1),
            BasisKind::H(i) => format!("h{}", i + 1),
            BasisKind::E(k) => format!("e{}", k + 1),
        }
    }

    /// Exhaustive verification of antisymmetry, the Jacobi identity and the
    /// Cartan eigenvalues.
    pub fn check_invariants(&self) -> Result<()> {
        let d = self.dim;
        for a in 0..d {
            for b in 0..d {
                let mut sum = dense(d, &self.brackets[a][b]);
                for (k, c) in &self.brackets[b][a] {
                    sum[*k] += c;
                }
                if sum.iter().any(|x| !x.is_zero()) {
                    return Err(Error::Consistency(format!("antisymmetry fails on ({a}, {b})")));
                }
            }
        }
        for i in 0..self.rank() {
            let h = self.h(i);
            for b in 0..d {
                let w = self.weight(b);
                let eig: i64 = (0..self.rank()).map(|j| w[j] * self.rs.cartan()[j][i]).sum();
                let expect: Combo = if eig == 0 { vec![] } else { vec![(b, q(eig))] };
                if self.brackets[h][b] != expect {
                    return Err(Error::Consistency(format!("[h{}, {}] has the wrong eigenvalue", i + 1, self.basis_name(b))));
                }
            }
        }
        for a in 0..d {
            for b in (a + 1)..d {
                for c in (b + 1)..d {
                    let mut acc = vec![Q::zero(); d];
                    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                        for (k, s) in &self.brackets[y][z] {
                            for (m, t) in &self.brackets[x][*k] {
                                acc[*m] += s * t;
                            }
                        }
                    }
                    if acc.iter().any(|v| !v.is_zero()) {
                        return Err(Error::Consistency(format!("Jacobi identity fails on ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(())
    }
}

enum WeightClass {
    Zero,
    Basis(usize),
}

fn dense(d: usize, c: &Combo) -> Vec<Q> {
    let mut v = vec![Q::zero(); d];
    for (k, x) in c {
        v[*k] += x;
    }
    v
}

/// Exact solution of an overdetermined but consistent system, via a maximal
/// independent set of rows.
fn least_squares_exact(rows: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let ncols = rows.first()?.len();
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<Q>> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut r = row.clone();
        for b in &basis {
            let p = b.iter().position(|x| !x.is_zero()).unwrap();
            if !r[p].is_zero() {
                let f = &r[p] / &b[p];
                for (x, y) in r.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        if r.iter().any(|x| !x.is_zero()) {
            basis.push(r);
            chosen.push(i);
        }
        if chosen.len() == ncols {
            break;
        }
    }
    if chosen.len() < ncols {
        return None;
    }
    let a: Vec<Vec<Q>> = chosen.iter().map(|&i| rows[i].clone()).collect();
    let b: Vec<Q> = chosen.iter().map(|&i| rhs[i].clone()).collect();
    solve(&a, &b)
}

pub fn chevalley_constants(rs: &RootSystem) -> Result<ChevalleyAlgebra> {
    ChevalleyAlgebra::new(rs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::Series;

    fn alg(s: Series, r: usize) -> ChevalleyAlgebra {
        ChevalleyAlgebra::new(&RootSystem::new(s, r).unwrap()).unwrap()
    }

    #[test]
    fn sl2_relations() {
        let a = alg(Series::A, 1);
        let (f, h, e) = (a.f(0), a.h(0), a.e(0));
        assert_eq!(a.bracket(e, f), &vec![(h, q(1))]);
        assert_eq!(a.bracket(h, e), &vec![(e, q(2))]);
        assert_eq!(a.bracket(h, f), &vec![(f, q(-2))]);
    }

    #[test]
    fn sl3_simple_brackets() {
        let a = alg(Series::A, 2);
        // roots ordered a1, a2, a1+a2
        let c = a.bracket(a.e(0), a.e(1));
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].0, a.e(2));
        assert!(c[0].1 == q(1) || c[0].1 == q(-1));
    }

    #[test]
    fn all_supported_types_are_integral_lie_algebras() {
        for (s, r) in [(Series::A, 1), (Series::A, 3), (Series::B, 2), (Series::B, 3), (Series::C, 3), (Series::D, 4), (Series::G, 2)] {
            let a = alg(s, r);
            assert_eq!(a.dim(), crate::rootsys::algebra_dimension(s, r));
            a.check_invariants().unwrap();
            for x in 0..a.dim() {
                for y in 0..a.dim() {
                    for (_, c) in a.bracket(x, y) {
                        assert!(c.is_integer(), "{} non-integral", a.root_system().name());
                    }
                }
            }
            // [e_alpha, f_alpha] = H_alpha
            for k in 0..a.num_positive() {
                let br = a.bracket(a.e(k), a.f(k));
                let expect: Combo = a.coroot(k).iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (a.h(i), c.clone())).collect();
                assert_eq!(br, &expect);
            }
        }
    }

    #[test]
    fn chevalley_string_property() {
        // [e_a, e_b] = +-(p+1) e_{a+b}
        let a = alg(Series::G, 2);
        let rs = a.root_system().clone();
        for (i, ra) in rs.positive_roots().iter().enumerate() {
            for (j, rb) in rs.positive_roots().iter().enumerate() {
                let sum = ra.add(rb);
                let Some(k) = rs.root_index(&sum) else { continue };
                let mut p = 0i64;
                let mut cur: Vec<i64> = rb.coeffs().iter().map(|&c| c as i64).collect();
                loop {
                    let next: Vec<i64> = cur.iter().zip(ra.coeffs()).map(|(x, y)| x - *y as i64).collect();
                    let is_root = next.iter().all(|&c| c >= 0) && rs.is_positive_root(&DegreeVector::new(next.iter().map(|&c| c as u32).collect()))
                        || next.iter().all(|&c| c <= 0) && next.iter().any(|&c| c != 0) && rs.is_positive_root(&DegreeVector::new(next.iter().map(|&c| (-c) as u32).collect()));
                    if !is_root {
                        break;
                    }
                    p += 1;
                    cur = next;
                }
                let c = a.bracket(a.e(i), a.e(j));
                assert_eq!(c.len(), 1);
                assert_eq!(c[0].0, a.e(k));
                assert!(c[0].1 == q(p + 1) || c[0].1 == q(-(p + 1)));
            }
        }
    }

    #[test]
    fn exceptional_e_f_are_reported_unsupported() {
        let rs = RootSystem::new(Series::F, 4).unwrap();
        assert!(matches!(ChevalleyAlgebra::new(&rs), Err(Error::UnsupportedType { .. })));
    }

    #[test]
    fn killing_form_is_invariant() {
        let a = alg(Series::B, 2);
        let k = a.killing_form();
        let d = a.dim();
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    // K([x,y],z) = K(x,[y,z])
                    let lhs: Q = a.bracket(x, y).iter().map(|(m, c)| c * &k[*m][z]).sum();
                    let rhs: Q = a.bracket(y, z).iter().map(|(m, c)| c * &k[x][*m]).sum();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
