//! Identity suites for the star product. Each check yields one record with
//! the residual rendered as text ("0" when it vanishes).

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{fmt_q, q, ScalarQt, Q};
use crate::enveloping::LeviSplit;
use crate::error::{Error, Result};
use crate::shapovalov::TwoTensor;

use super::function::{momentum_function, OrbitFunction};
use super::group::{evaluate, group_point, GroupPoint};
use super::star::{composition_rhs, poisson, StarProduct};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Composition,
    MomentumMap,
    Associativity,
    Separation,
    HInvariance,
    OrderLaws,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Composition, Suite::MomentumMap, Suite::Associativity, Suite::Separation, Suite::HInvariance, Suite::OrderLaws];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Composition => "composition",
            Suite::MomentumMap => "momentum-map",
            Suite::Associativity => "associativity",
            Suite::Separation => "separation",
            Suite::HInvariance => "h-invariance",
            Suite::OrderLaws => "order-laws",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| Error::Argument(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VerifyRecord {
    pub check_id: String,
    pub inputs: String,
    pub residual: String,
    pub pass: bool,
}

/// Sample counts for the suites.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random functions per check in the symbol-level suites.
    pub samples: usize,
    /// Triples for associativity.
    pub triples: usize,
    /// Group points per triple.
    pub points: usize,
    /// Letters per group word.
    pub word_length: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, samples: 4, triples: 20, points: 10, word_length: 4 }
    }
}

pub struct Verifier {
    split: LeviSplit,
    star: StarProduct,
}

fn residual_text(f: &OrbitFunction, split: &LeviSplit) -> String {
    if f.is_zero() {
        "0".into()
    } else {
        f.render(split.algebra())
    }
}

fn record(check_id: String, inputs: String, residual: &OrbitFunction, split: &LeviSplit) -> VerifyRecord {
    VerifyRecord { check_id, inputs, residual: residual_text(residual, split), pass: residual.is_zero() }
}

fn small_rational(rng: &mut ChaCha8Rng) -> Q {
    let n: i64 = rng.gen_range(-4..=4);
    let d: i64 = rng.gen_range(1..=3);
    crate::arith::qf(if n == 0 { 1 } else { n }, d)
}

impl Verifier {
    pub fn new(b: &TwoTensor) -> Self {
        Verifier { split: b.split().clone(), star: StarProduct::new(b) }
    }

    pub fn split(&self) -> &LeviSplit {
        &self.split
    }

    pub fn star(&self) -> &StarProduct {
        &self.star
    }

    fn rng(config: &SuiteConfig, suite: Suite) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(suite as u64 + 1);
        rng
    }

    /// Random polynomial in arbitrary symbols `X[k, h]` of degree at most
    /// `max_degree`.
    pub fn random_function(&self, rng: &mut ChaCha8Rng, max_degree: usize) -> OrbitFunction {
        let d = self.split.algebra().dim();
        let nterms = rng.gen_range(1..=3);
        let terms: Vec<(Q, Vec<(usize, usize)>)> = (0..nterms)
            .map(|_| {
                let deg = rng.gen_range(1..=max_degree);
                let vars = (0..deg).map(|_| (rng.gen_range(0..d), rng.gen_range(0..d))).collect();
                (q(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 }), vars)
            })
            .collect();
        OrbitFunction::from_terms(d, &terms)
    }

    /// Random polynomial in the momentum functions of degree at most
    /// `max_degree`, with a possible constant term.
    pub fn random_momentum_polynomial(&self, rng: &mut ChaCha8Rng, max_degree: usize) -> (OrbitFunction, String) {
        let alg = self.split.algebra();
        let d = alg.dim();
        let mut f = OrbitFunction::zero(d);
        let mut desc = Vec::new();
        for _ in 0..rng.gen_range(1..=2) {
            let c = q(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 });
            let deg = rng.gen_range(1..=max_degree);
            let hs: Vec<usize> = (0..deg).map(|_| rng.gen_range(0..d)).collect();
            let term = hs.iter().fold(OrbitFunction::constant(d, &ScalarQt::from_q(c.clone())), |acc, &h| acc.mul(&momentum_function(&self.split, h)));
            desc.push(format!("{}*{}", fmt_q(&c), hs.iter().map(|&h| format!("F{}", alg.basis_name(h))).collect::<Vec<_>>().join("*")));
            f = f.add(&term);
        }
        if rng.gen_bool(0.3) {
            let c = q(rng.gen_range(1..=5));
            desc.push(fmt_q(&c));
            f = f.add(&OrbitFunction::constant(d, &ScalarQt::from_q(c)));
        }
        (f, desc.join(" + "))
    }

    pub fn random_point(&self, rng: &mut ChaCha8Rng, len: usize) -> Result<GroupPoint> {
        let alg = self.split.algebra();
        let npos = alg.num_positive();
        let word: Vec<(usize, Q)> = (0..len)
            .map(|_| {
                let k = rng.gen_range(0..npos);
                let b = if rng.gen_bool(0.5) { alg.e(k) } else { alg.f(k) };
                (b, small_rational(rng))
            })
            .collect();
        group_point(alg, &word)
    }

    fn describe(&self, f: &OrbitFunction) -> String {
        f.render(self.split.algebra())
    }

    pub fn run(&self, suites: &[Suite], config: &SuiteConfig) -> Result<Vec<VerifyRecord>> {
        let mut out = Vec::new();
        for &s in suites {
            let mut rng = Verifier::rng(config, s);
            let recs = match s {
                Suite::Composition => self.composition(&mut rng, config)?,
                Suite::MomentumMap => self.momentum_map(&mut rng, config)?,
                Suite::Associativity => self.associativity(&mut rng, config)?,
                Suite::Separation => self.separation(&mut rng, config)?,
                Suite::HInvariance => self.h_invariance(&mut rng, config)?,
                Suite::OrderLaws => self.order_laws(&mut rng, config)?,
            };
            out.extend(recs);
        }
        Ok(out)
    }

    /// `f * f_h` against the closed composition formula, at symbol level.
    pub fn composition(&self, rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Result<Vec<VerifyRecord>> {
        let alg = self.split.algebra();
        let mut out = Vec::new();
        for i in 0..config.samples {
            let f = self.random_function(rng, 3);
            for h in 0..alg.dim() {
                let fh = momentum_function(&self.split, h);
                let res = self.star.star(&f, &fh)?.sub(&composition_rhs(&self.split, self.star.action(), &f, &fh, 1));
                out.push(record(
                    "composition/star".into(),
                    format!("sample={i} h={} f={}", alg.basis_name(h), self.describe(&f)),
                    &res,
                    &self.split,
                ));
            }
        }
        Ok(out)
    }

    /// `f_h * f - f * f_h = t {f_h, f}` at symbol level.
    pub fn momentum_map(&self, rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Result<Vec<VerifyRecord>> {
        let alg = self.split.algebra();
        let t = ScalarQt::t();
        let mut out = Vec::new();
        for i in 0..config.samples {
            let f = self.random_function(rng, 3);
            for h in 0..alg.dim() {
                let fh = momentum_function(&self.split, h);
                let lhs = self.star.star(&fh, &f)?.sub(&self.star.star(&f, &fh)?);
                let res = lhs.sub(&poisson(&self.split, self.star.action(), &fh, &f).scale(&t));
                out.push(record(
                    "momentum-map/commutator".into(),
                    format!("sample={i} h={} f={}", alg.basis_name(h), self.describe(&f)),
                    &res,
                    &self.split,
                ));
            }
        }
        Ok(out)
    }

    /// `(f * g) * h - f * (g * h)` evaluated at random group points.
    pub fn associativity(&self, rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Result<Vec<VerifyRecord>> {
        let theta = self.split.algebra().root_system().highest_root().height() as usize;
        let mut out = Vec::new();
        for i in 0..config.triples {
            let (f, fd) = self.random_momentum_polynomial(rng, 2);
            let (g, gd) = self.random_momentum_polynomial(rng, 2);
            let (h, hd) = self.random_momentum_polynomial(rng, 2);
            let lhs = self.star.star(&self.star.star(&f, &g)?, &h)?;
            let rhs = self.star.star(&f, &self.star.star(&g, &h)?)?;
            let res = lhs.sub(&rhs);
            // entries of Ad are polynomials of degree <= 2 ht(theta) in each
            // word parameter
            let bound = res.degree() * 2 * theta;
            out.push(VerifyRecord {
                check_id: "associativity/symbolic".into(),
                inputs: format!("triple={i} f={fd} g={gd} h={hd} (diagnostic)"),
                residual: if res.is_zero() { "0".into() } else { format!("{} terms", res.num_terms()) },
                pass: true,
            });
            for p in 0..config.points {
                let pt = self.random_point(rng, config.word_length)?;
                let v = evaluate(&res, &pt);
                let word: Vec<String> = pt.word.iter().map(|(b, s)| format!("{}:{}", self.split.algebra().basis_name(*b), fmt_q(s))).collect();
                out.push(VerifyRecord {
                    check_id: "associativity/point".into(),
                    inputs: format!("triple={i} point={p} word=[{}] degree_bound_per_parameter={bound}", word.join(",")),
                    residual: if v.is_zero() { "0".into() } else { v.to_string() },
                    pass: v.is_zero(),
                });
            }
        }
        Ok(out)
    }

    /// Functions killed by one nilpotent half multiply without deformation
    /// on the corresponding side.
    pub fn separation(&self, rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Result<Vec<VerifyRecord>> {
        let alg = self.split.algebra();
        let d = alg.dim();
        let rs = alg.root_system();
        let theta = rs.root_index(rs.highest_root()).expect("highest root");
        let killing = alg.killing_form();
        let lowest = alg.f(theta);
        let highest = alg.e(theta);
        let beta_low: Vec<Q> = killing[lowest].clone();
        let beta_high: Vec<Q> = killing[highest].clone();
        let act = self.star.action();
        let cutoff = self.star.cutoff();
        let mut out = Vec::new();
        for (side, beta, killers) in [
            ("lowering", &beta_low, self.split.delta_plus().iter().map(|&k| alg.f(k)).collect::<Vec<_>>()),
            ("raising", &beta_high, self.split.delta_plus().iter().map(|&k| alg.e(k)).collect::<Vec<_>>()),
        ] {
            for i in 0..config.samples {
                let h1 = rng.gen_range(0..d);
                let h2 = rng.gen_range(0..d);
                let mut f = OrbitFunction::from_dual(d, beta, h1);
                if i % 2 == 1 {
                    f = f.mul(&OrbitFunction::from_dual(d, beta, h2)).add(&OrbitFunction::one(d));
                }
                let killed = killers.iter().map(|&x| act.apply_basis(x, &f)).find(|r| !r.is_zero()).unwrap_or_else(|| OrbitFunction::zero(d));
                out.push(record(format!("separation/{side}-killed"), format!("sample={i} f={}", self.describe(&f)), &killed, &self.split));
                let (g, gd) = self.random_momentum_polynomial(rng, 2);
                let g = g.add(&self.random_function(rng, 2));
                let prod = if side == "lowering" {
                    self.star.star_window(&f, &g, cutoff)?
                } else {
                    self.star.star_window(&g, &f, cutoff)?
                };
                let res = prod.sub(&f.mul(&g));
                out.push(record(format!("separation/{side}-product"), format!("sample={i} f={} g={gd} + random", self.describe(&f)), &res, &self.split));
            }
        }
        Ok(out)
    }

    /// Centralizer derivations annihilate products of momentum polynomials.
    pub fn h_invariance(&self, rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Result<Vec<VerifyRecord>> {
        let alg = self.split.algebra();
        let act = self.star.action();
        let levi: Vec<usize> = (0..alg.dim()).filter(|&b| self.split.in_levi(b)).collect();
        let mut out = Vec::new();
        for i in 0..config.samples {
            let (f, fd) = self.random_momentum_polynomial(rng, 2);
            let (g, gd) = self.random_momentum_polynomial(rng, 2);
            let p = self.star.star(&f, &g)?;
            for &z in &levi {
                let res = act.apply_basis(z, &p);
                out.push(record(
                    "h-invariance/derivation".into(),
                    format!("sample={i} z={} f={fd} g={gd}", alg.basis_name(z)),
                    &res,
                    &self.split,
                ));
            }
        }
        Ok(out)
    }

    /// `f * g = fg + O(t)` and `[f, g]_* = t {f, g} + O(t^2)`.
    pub fn order_laws(&self, rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Result<Vec<VerifyRecord>> {
        let mut out = Vec::new();
        for i in 0..config.samples {
            let (f, fd) = self.random_momentum_polynomial(rng, 2);
            let (g, gd) = self.random_momentum_polynomial(rng, 2);
            let fg = self.star.star(&f, &g)?;
            let gf = self.star.star(&g, &f)?;
            let zeroth = fg.sub(&f.mul(&g)).taylor(0)?;
            out.push(record("order-laws/zeroth".into(), format!("sample={i} f={fd} g={gd}"), &zeroth, &self.split));
            let first = fg.sub(&gf).taylor(1)?.sub(&poisson(&self.split, self.star.action(), &f, &g));
            out.push(record("order-laws/first".into(), format!("sample={i} f={fd} g={gd}"), &first, &self.split));
        }
        Ok(out)
    }
}

/// Module form of the composition identity for `B` itself.
pub fn module_records(b: &TwoTensor) -> Vec<VerifyRecord> {
    b.momentum_identity_check()
        .into_iter()
        .map(|r| VerifyRecord { check_id: "composition/module".into(), inputs: format!("degree={}", r.degree), residual: r.residual, pass: r.pass })
        .collect()
}
