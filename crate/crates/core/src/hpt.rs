//! The two homological perturbation lemmas, plus a small library of random
//! finite filtered complexes to exercise them.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::check::{CheckOutcome, Measure, ResidualSummary};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::operator::{neumann_inverse, Contraction, Linear, Operator, SideConditions};
use crate::scalar::Scalar;

fn verify<M: Measure>(identity: &str, results: impl Iterator<Item = Result<M>>) -> Result<()> {
    let mut out = CheckOutcome::start();
    for (k, r) in results.enumerate() {
        match r {
            Ok(m) => out.record(|| alloc::format!("probe {k}"), &m),
            Err(e) => out.fail(alloc::format!("probe {k}: {e}")),
        }
    }
    match out.witness {
        None => Ok(()),
        Some(witness) => Err(Error::LemmaHypothesis { identity: identity.into(), witness }),
    }
}

/// `(id + t h + h t)^{-1}`; raising because `t` is.
fn correction<Y: Linear>(h: &Operator<Y, Y>, t_y: &Operator<Y, Y>) -> Result<Operator<Y, Y>> {
    neumann_inverse(&h.then(t_y).plus(&t_y.then(h)))
}

fn check_perturbation<X: Linear, Y: Linear>(
    c: &Contraction<X, Y>,
    t_y: &Operator<Y, Y>,
    t_x: &Operator<X, X>,
    xs: &[X],
    ys: &[Y],
) -> Result<(Operator<X, X>, Operator<Y, Y>)> {
    let big_dy = c.d_y.plus(t_y).named(alloc::format!("({} + {})", c.d_y.name(), t_y.name()));
    let big_dx = c.d_x.plus(t_x).named(alloc::format!("({} + {})", c.d_x.name(), t_x.name()));
    verify("D_Y^2 = 0", ys.iter().map(|y| big_dy.apply(&big_dy.apply(y)?)))?;
    verify("D_X^2 = 0", xs.iter().map(|x| big_dx.apply(&big_dx.apply(x)?)))?;
    Ok((big_dx, big_dy))
}

/// First perturbation lemma: perturbs `i` and `h`, keeps `p`.
///
/// Needs `p h = 0` and `t_X p = p t_Y`; both are verified on the probes along
/// with `D_Y² = 0` and `D_X² = 0`.
pub fn perturb_v1<X: Linear, Y: Linear>(
    c: &Contraction<X, Y>,
    t_y: &Operator<Y, Y>,
    t_x: &Operator<X, X>,
    xs: &[X],
    ys: &[Y],
) -> Result<Contraction<X, Y>> {
    if !c.side.sc3 {
        return Err(Error::LemmaHypothesis { identity: "p h = 0".into(), witness: "side condition not flagged".into() });
    }
    verify("p h = 0", ys.iter().map(|y| c.p.apply(&c.h.apply(y)?)))?;
    verify("t_X p = p t_Y", ys.iter().map(|y| Ok(t_x.apply(&c.p.apply(y)?)?.sub(&c.p.apply(&t_y.apply(y)?)?))))?;
    let (d_x, d_y) = check_perturbation(c, t_y, t_x, xs, ys)?;
    let big_h = correction(&c.h, t_y)?.then(&c.h).named(alloc::format!("H[{}]", c.h.name()));
    let (i, hh, ty, tx) = (c.i.clone(), big_h.clone(), t_y.clone(), t_x.clone());
    let big_i = Operator::new(alloc::format!("I[{}]", c.i.name()), c.i.degree(), move |x: &X| {
        let ix = i.apply(x)?;
        let inner = ty.apply(&ix)?.sub(&i.apply(&tx.apply(x)?)?);
        Ok(ix.sub(&hh.apply(&inner)?))
    });
    let side = if c.side == SideConditions::all() { c.side } else { SideConditions { sc3: true, ..Default::default() } };
    Ok(Contraction { p: c.p.clone(), i: big_i, h: big_h, d_x, d_y, side })
}

/// Second perturbation lemma: perturbs `p` and `h`, keeps `i`.
///
/// Needs `h i = 0` and `t_Y i = i t_X`.
pub fn perturb_v2<X: Linear, Y: Linear>(
    c: &Contraction<X, Y>,
    t_y: &Operator<Y, Y>,
    t_x: &Operator<X, X>,
    xs: &[X],
    ys: &[Y],
) -> Result<Contraction<X, Y>> {
    if !c.side.sc2 {
        return Err(Error::LemmaHypothesis { identity: "h i = 0".into(), witness: "side condition not flagged".into() });
    }
    verify("h i = 0", xs.iter().map(|x| c.h.apply(&c.i.apply(x)?)))?;
    verify("t_Y i = i t_X", xs.iter().map(|x| Ok(t_y.apply(&c.i.apply(x)?)?.sub(&c.i.apply(&t_x.apply(x)?)?))))?;
    let (d_x, d_y) = check_perturbation(c, t_y, t_x, xs, ys)?;
    let inv = correction(&c.h, t_y)?;
    let big_h = inv.then(&c.h).named(alloc::format!("H'[{}]", c.h.name()));
    let big_p = inv.then(&c.p).named(alloc::format!("P[{}]", c.p.name()));
    let side = if c.side == SideConditions::all() { c.side } else { SideConditions { sc2: true, ..Default::default() } };
    Ok(Contraction { p: big_p, i: c.i.clone(), h: big_h, d_x, d_y, side })
}

/// Dense coordinate vector, the element type of the random complex library.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseVec(pub Vec<Scalar>);

impl Measure for DenseVec {
    fn is_null(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    fn summary(&self) -> ResidualSummary {
        ResidualSummary { nonzero_coefficients: self.0.iter().filter(|x| !x.is_zero()).count(), max_degree: 0 }
    }

    fn describe(&self) -> String {
        match self.0.iter().position(|x| !x.is_zero()) {
            Some(k) => alloc::format!("entry {k} = {}", self.0[k]),
            None => "0".into(),
        }
    }
}

impl Linear for DenseVec {
    fn add(&self, other: &Self) -> Self {
        DenseVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn sub(&self, other: &Self) -> Self {
        DenseVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn scale(&self, c: &Scalar) -> Self {
        DenseVec(self.0.iter().map(|a| a * c).collect())
    }

    fn zero_like(&self) -> Self {
        DenseVec(vec![Scalar::zero(); self.0.len()])
    }
}

pub fn matrix_op(name: &str, degree: i32, m: Matrix) -> Operator<DenseVec, DenseVec> {
    Operator::new(name, degree, move |x: &DenseVec| Ok(DenseVec(m.mul_vec(&x.0)?)))
}

/// A perturbation `(t_Y, t_X)` of a [`FilteredComplex`].
#[derive(Clone, Debug)]
pub struct Perturbation {
    pub t_y: Operator<DenseVec, DenseVec>,
    pub t_x: Operator<DenseVec, DenseVec>,
}

/// Random finite filtered complex with a contraction onto its homology.
///
/// Each filtration level is a copy of `X₋₁ ⊕ B ⊕ X₀ ⊕ A` with `B` in degree
/// −1, `A` in degree 0 and `d: B → A` invertible.  Everything is then
/// conjugated by a random degree- and filtration-preserving automorphism, so
/// none of `p`, `i`, `h` is a coordinate projection.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    pub contraction: Contraction<DenseVec, DenseVec>,
    /// Perturbation satisfying `t_X p = p t_Y`.
    pub v1: Perturbation,
    /// Perturbation satisfying `t_Y i = i t_X`.
    pub v2: Perturbation,
    /// Degree −1 map `X₀ → X₋₁` that commutes with `d`; adding it to `h`
    /// keeps the homotopy identity but breaks `h i = 0` and `p h = 0`.
    pub spoiler: Operator<DenseVec, DenseVec>,
    pub x_dim: usize,
    pub y_dim: usize,
    pub levels: usize,
}

struct Layout {
    nx1: usize,
    nb: usize,
    nx0: usize,
    levels: usize,
}

impl Layout {
    fn block(&self) -> usize {
        self.nx1 + 2 * self.nb + self.nx0
    }

    fn x_block(&self) -> usize {
        self.nx1 + self.nx0
    }

    fn x1(&self, lv: usize, k: usize) -> usize {
        lv * self.block() + k
    }

    fn b(&self, lv: usize, k: usize) -> usize {
        lv * self.block() + self.nx1 + k
    }

    fn x0(&self, lv: usize, k: usize) -> usize {
        lv * self.block() + self.nx1 + self.nb + k
    }

    fn a(&self, lv: usize, k: usize) -> usize {
        lv * self.block() + self.nx1 + self.nb + self.nx0 + k
    }

    fn xx1(&self, lv: usize, k: usize) -> usize {
        lv * self.x_block() + k
    }

    fn xx0(&self, lv: usize, k: usize) -> usize {
        lv * self.x_block() + self.nx1 + k
    }
}

pub fn random_scalar<R: Rng>(rng: &mut R) -> Scalar {
    Scalar::ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2))
}

/// Inverse of a unit lower (`lower`) or unit upper triangular matrix.
fn invert_unit_triangular(m: &Matrix, lower: bool) -> Matrix {
    let n = m.rows();
    let mut inv = Matrix::identity(n);
    for col in 0..n {
        let rows: Vec<usize> = if lower { (0..n).collect() } else { (0..n).rev().collect() };
        for i in rows {
            let mut s = if i == col { Scalar::one() } else { Scalar::zero() };
            let range = if lower { 0..i } else { i + 1..n };
            for k in range {
                s -= &(m.get(i, k) * inv.get(k, col));
            }
            inv.set(i, col, s);
        }
    }
    inv
}

/// Random `L U` with `L` unit lower triangular and `U` unit upper triangular
/// inside the groups of `same_level`, together with its exact inverse.
/// Indices are assumed sorted by level, so the result preserves the filtration.
fn random_automorphism<R: Rng>(rng: &mut R, level: &[usize]) -> (Matrix, Matrix) {
    let n = level.len();
    let mut l = Matrix::identity(n);
    let mut u = Matrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            l.set(i, j, random_scalar(rng));
            if level[i] == level[j] {
                u.set(j, i, random_scalar(rng));
            }
        }
    }
    let g = l.mul(&u).expect("square");
    let g_inv = invert_unit_triangular(&u, false).mul(&invert_unit_triangular(&l, true)).expect("square");
    (g, g_inv)
}

impl FilteredComplex {
    pub fn random<R: Rng>(rng: &mut R) -> FilteredComplex {
        let lay = Layout {
            nx1: rng.gen_range(1..=2),
            nb: rng.gen_range(1..=2),
            nx0: rng.gen_range(1..=2),
            levels: rng.gen_range(2..=3),
        };
        let (ny, nx) = (lay.block() * lay.levels, lay.x_block() * lay.levels);
        let (s, s_inv) = random_automorphism(rng, &vec![0; lay.nb]);
        let mut d0 = Matrix::zeros(ny, ny);
        let mut h0 = Matrix::zeros(ny, ny);
        let mut i0 = Matrix::zeros(ny, nx);
        let mut p0 = Matrix::zeros(nx, ny);
        let mut spoil = Matrix::zeros(ny, ny);
        for lv in 0..lay.levels {
            for k in 0..lay.nx1 {
                i0.set(lay.x1(lv, k), lay.xx1(lv, k), Scalar::one());
                p0.set(lay.xx1(lv, k), lay.x1(lv, k), Scalar::one());
            }
            for k in 0..lay.nx0 {
                i0.set(lay.x0(lv, k), lay.xx0(lv, k), Scalar::one());
                p0.set(lay.xx0(lv, k), lay.x0(lv, k), Scalar::one());
                for j in 0..lay.nx1 {
                    spoil.set(lay.x1(lv, j), lay.x0(lv, k), random_scalar(rng));
                }
            }
            for r in 0..lay.nb {
                for c in 0..lay.nb {
                    d0.set(lay.a(lv, r), lay.b(lv, c), s.get(r, c).clone());
                    h0.set(lay.b(lv, r), lay.a(lv, c), s_inv.get(r, c).clone());
                }
            }
        }
        // Degree −1 and degree 0 coordinates are transformed separately.
        let mut g = Matrix::zeros(ny, ny);
        let mut g_inv = Matrix::zeros(ny, ny);
        let blk = lay.block();
        let split = lay.nx1 + lay.nb;
        for idx in [
            (0..ny).filter(|j| j % blk < split).collect::<Vec<_>>(),
            (0..ny).filter(|j| j % blk >= split).collect::<Vec<_>>(),
        ] {
            let levels: Vec<usize> = idx.iter().map(|j| j / blk).collect();
            let (a, a_inv) = random_automorphism(rng, &levels);
            for (r, &ir) in idx.iter().enumerate() {
                for (c, &ic) in idx.iter().enumerate() {
                    g.set(ir, ic, a.get(r, c).clone());
                    g_inv.set(ir, ic, a_inv.get(r, c).clone());
                }
            }
        }
        let conj = |m: &Matrix| g.mul(m).and_then(|x| x.mul(&g_inv)).expect("square");
        let contraction = Contraction {
            p: matrix_op("p", 0, p0.mul(&g_inv).expect("shape")),
            i: matrix_op("i", 0, g.mul(&i0).expect("shape")),
            h: matrix_op("h", -1, conj(&h0)),
            d_x: matrix_op("d_X", 1, Matrix::zeros(nx, nx)),
            d_y: matrix_op("d_Y", 1, conj(&d0)),
            side: SideConditions::all(),
        };
        let mut perturbation = |version: u8| {
            let mut t = Matrix::zeros(ny, ny);
            let mut tx = Matrix::zeros(nx, nx);
            for src in 0..lay.levels {
                for dst in src + 1..lay.levels {
                    for j in 0..lay.nx1 {
                        for k in 0..lay.nx0 {
                            let c = random_scalar(rng);
                            t.set(lay.x0(dst, k), lay.x1(src, j), c.clone());
                            tx.set(lay.xx0(dst, k), lay.xx1(src, j), c);
                        }
                        if version == 1 {
                            for k in 0..lay.nb {
                                t.set(lay.a(dst, k), lay.x1(src, j), random_scalar(rng));
                            }
                        }
                    }
                    for j in 0..lay.nb {
                        for k in 0..lay.nb {
                            t.set(lay.a(dst, k), lay.b(src, j), random_scalar(rng));
                        }
                        if version == 2 {
                            for k in 0..lay.nx0 {
                                t.set(lay.x0(dst, k), lay.b(src, j), random_scalar(rng));
                            }
                        }
                    }
                }
            }
            Perturbation {
                t_y: matrix_op("t_Y", 1, conj(&t)).raising(lay.levels),
                t_x: matrix_op("t_X", 1, tx).raising(lay.levels),
            }
        };
        let v1 = perturbation(1);
        let v2 = perturbation(2);
        FilteredComplex {
            contraction,
            v1,
            v2,
            spoiler: matrix_op("v", -1, conj(&spoil)),
            x_dim: nx,
            y_dim: ny,
            levels: lay.levels,
        }
    }

    pub fn random_x<R: Rng>(&self, rng: &mut R) -> DenseVec {
        DenseVec((0..self.x_dim).map(|_| random_scalar(rng)).collect())
    }

    pub fn random_y<R: Rng>(&self, rng: &mut R) -> DenseVec {
        DenseVec((0..self.y_dim).map(|_| random_scalar(rng)).collect())
    }

    /// The unperturbed contraction with `h` replaced by `h + v`.
    pub fn spoiled(&self) -> Contraction<DenseVec, DenseVec> {
        let c = &self.contraction;
        Contraction { h: c.h.plus(&self.spoiler).named("h + v"), side: SideConditions { sc1: true, ..Default::default() }, ..c.clone() }
    }

    /// Zero perturbation of the right shape.
    pub fn zero_perturbation(&self) -> Perturbation {
        Perturbation {
            t_y: Operator::zero("0", 1, DenseVec(vec![Scalar::zero(); self.y_dim])).raising(0),
            t_x: Operator::zero("0", 1, DenseVec(vec![Scalar::zero(); self.x_dim])).raising(0),
        }
    }
}
