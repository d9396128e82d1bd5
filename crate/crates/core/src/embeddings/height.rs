//! Linear height functions on the standard embedding: critical points,
//! Morse indices, and the pointwise Hessian identity.
//!
//! `Ξ` acts on `K³` through the real `3k × 3k` symmetric matrix whose blocks
//! are left multiplications by its entries. For `k ≤ 4` the algebra is
//! associative, so every eigenspace is a right `K`-line of real dimension `k`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use super::algebra::Real;
use super::hermitian::{veronese_point, HermitianPoint};
use crate::error::KernelError;

const HESSIAN_STEP: f64 = 1e-4;
const INDEX_TOLERANCE: f64 = 1e-6;

/// A critical point of `h_Ξ(A) = Re tr(ΞA)`.
#[derive(Clone, Debug)]
pub struct CriticalPoint {
    pub direction: [Real; 3],
    pub point: HermitianPoint<f64>,
    pub value: f64,
    pub index: usize,
    pub hessian_eigenvalues: Vec<f64>,
}

fn check_associative(k: usize) -> Result<(), KernelError> {
    match k {
        1 | 2 | 4 => Ok(()),
        _ => Err(KernelError::InvalidK(k)),
    }
}

/// Matrix of `y ↦ x·y` on coordinates.
fn left_multiplication(x: &Real) -> DMatrix<f64> {
    let k = x.dim();
    let mut m = DMatrix::zeros(k, k);
    for c in 0..k {
        let col = x.mul(&Real::unit(k, c));
        for r in 0..k {
            m[(r, c)] = col.coords()[r];
        }
    }
    m
}

pub fn real_representation(xi: &HermitianPoint<f64>) -> DMatrix<f64> {
    let k = xi.k();
    let mut m = DMatrix::zeros(3 * k, 3 * k);
    for i in 0..3 {
        for j in 0..3 {
            m.view_mut((i * k, j * k), (k, k)).copy_from(&left_multiplication(xi.get(i, j)));
        }
    }
    m
}

/// `Re tr(ΞA)`.
pub fn height(xi: &HermitianPoint<f64>, a: &HermitianPoint<f64>) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += xi.get(i, j).mul(a.get(j, i)).re();
        }
    }
    s
}

fn split(k: usize, v: &[f64]) -> [Real; 3] {
    std::array::from_fn(|i| Real::new(v[i * k..(i + 1) * k].to_vec()).expect("valid k"))
}

fn vector_norm(v: &[Real; 3]) -> f64 {
    v.iter().map(|e| e.norm()).sum::<f64>().sqrt()
}

fn largest_coordinate(v: &[Real; 3]) -> usize {
    (0..3).max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm())).expect("three coordinates")
}

/// `y_i = v_i + Σ_l u_l,i · t_l`, with each `t_l` a block of `k` chart
/// coordinates.
fn chart_vector(base: &[Real; 3], dirs: &[[Real; 3]], t: &[f64]) -> [Real; 3] {
    let k = base[0].dim();
    std::array::from_fn(|i| {
        dirs.iter().enumerate().fold(base[i].clone(), |acc, (l, u)| {
            let tl = Real::new(t[l * k..(l + 1) * k].to_vec()).expect("valid k");
            acc.add(&u[i].mul(&tl))
        })
    })
}

fn point_of(y: &[Real; 3]) -> Result<HermitianPoint<f64>, KernelError> {
    veronese_point(y, largest_coordinate(y))
}

/// Central-difference Hessian of a scalar function of `n` variables.
pub fn finite_difference_hessian(n: usize, step: f64, f: impl Fn(&[f64]) -> f64) -> DMatrix<f64> {
    let at = |shifts: &[(usize, f64)]| {
        let mut t = vec![0.0; n];
        for &(i, s) in shifts {
            t[i] += s;
        }
        f(&t)
    };
    let f0 = at(&[]);
    let h = step;
    DMatrix::from_fn(n, n, |a, b| {
        if a == b {
            (at(&[(a, h)]) - 2.0 * f0 + at(&[(a, -h)])) / (h * h)
        } else {
            (at(&[(a, h), (b, h)]) - at(&[(a, h), (b, -h)]) - at(&[(a, -h), (b, h)]) + at(&[(a, -h), (b, -h)]))
                / (4.0 * h * h)
        }
    })
}

/// The three critical points of `h_Ξ`, ordered by value, with indices read
/// off a finite-difference Hessian in the chart spanned by the other two
/// eigenlines.
pub fn height_critical_points(xi: &HermitianPoint<f64>) -> Result<Vec<CriticalPoint>, KernelError> {
    let k = xi.k();
    check_associative(k)?;
    if xi.hermitian_defect().iter().flatten().any(|e| e.max_abs() > 1e-12) {
        return Err(KernelError::Degenerate("height matrix is not Hermitian".into()));
    }
    let eig = SymmetricEigen::new(real_representation(xi));
    let mut order: Vec<usize> = (0..3 * k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for g in 0..3 {
        let group = &values[g * k..(g + 1) * k];
        if group[k - 1] - group[0] > 1e-9 * scale {
            return Err(KernelError::Degenerate("eigenvalue multiplicity is not a multiple of k".into()));
        }
    }
    for g in 1..3 {
        if values[g * k] - values[g * k - 1] < 1e-6 * scale {
            return Err(KernelError::Degenerate("repeated eigenvalues".into()));
        }
    }
    let lines: Vec<[Real; 3]> = (0..3)
        .map(|g| {
            let col: Vec<f64> = eig.eigenvectors.column(order[g * k]).iter().cloned().collect();
            let v = split(k, &col);
            let n = vector_norm(&v);
            std::array::from_fn(|i| v[i].scale(&(1.0 / n)))
        })
        .collect();

    let mut out = Vec::new();
    for g in 0..3 {
        let base = &lines[g];
        let dirs: Vec<[Real; 3]> = (0..3).filter(|&l| l != g).map(|l| lines[l].clone()).collect();
        let hess = finite_difference_hessian(2 * k, HESSIAN_STEP, |t| {
            height(xi, &point_of(&chart_vector(base, &dirs, t)).expect("nonzero chart vector"))
        });
        let mut ev: Vec<f64> = SymmetricEigen::new(hess).eigenvalues.iter().cloned().collect();
        ev.sort_by(f64::total_cmp);
        if ev.iter().any(|e| e.abs() < INDEX_TOLERANCE) {
            return Err(KernelError::Degenerate("degenerate critical point".into()));
        }
        let point = point_of(base)?;
        out.push(CriticalPoint {
            direction: base.clone(),
            value: height(xi, &point),
            point,
            index: ev.iter().filter(|e| **e < 0.0).count(),
            hessian_eigenvalues: ev,
        });
    }
    Ok(out)
}

/// A Hermitian matrix with uniform entries in `[-1, 1]`.
pub fn random_hermitian(k: usize, rng: &mut impl rand::Rng) -> HermitianPoint<f64> {
    let mut e: [[Real; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| Real::zero(k)));
    for i in 0..3 {
        e[i][i] = Real::real(k, rng.gen_range(-1.0..1.0));
        for j in i + 1..3 {
            let x = Real::new((0..k).map(|_| rng.gen_range(-1.0..1.0)).collect()).expect("valid k");
            e[j][i] = x.conj();
            e[i][j] = x;
        }
    }
    HermitianPoint::from_entries(e).expect("uniform dimension")
}

pub fn diagonal_height(k: usize, d: [f64; 3]) -> HermitianPoint<f64> {
    let e = std::array::from_fn(|i| std::array::from_fn(|j| if i == j { Real::real(k, d[i]) } else { Real::zero(k) }));
    HermitianPoint::from_entries(e).expect("uniform dimension")
}

/// Outcome of [`hessian_continuation_check`].
#[derive(Clone, Debug, Serialize)]
pub struct HessianCheck {
    pub hessian: Vec<Vec<f64>>,
    pub second_form: Vec<Vec<f64>>,
    pub gradient_norm: f64,
    pub max_error: f64,
    pub holds: bool,
}

fn hermitian_product(p: &[Real; 3], q: &[Real; 3]) -> Real {
    (0..3).fold(Real::zero(p[0].dim()), |acc, i| acc.add(&p[i].conj().mul(&q[i])))
}

/// `p` minus its components along the orthonormal `K`-lines `basis`,
/// normalized; `None` if nothing is left.
fn orthonormal_complement(p: &[Real; 3], basis: &[[Real; 3]]) -> Option<[Real; 3]> {
    let mut r = p.clone();
    for b in basis {
        let c = hermitian_product(b, &r);
        r = std::array::from_fn(|i| r[i].sub(&b[i].mul(&c)));
    }
    let n = vector_norm(&r);
    (n > 1e-6 * vector_norm(p).max(1.0)).then(|| std::array::from_fn(|i| r[i].scale(&(1.0 / n))))
}

fn jacobian(n: usize, out: usize, step: f64, f: &impl Fn(&[f64]) -> Vec<f64>) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(out, n);
    for a in 0..n {
        let mut tp = vec![0.0; n];
        let mut tm = vec![0.0; n];
        tp[a] = step;
        tm[a] = -step;
        let (fp, fm) = (f(&tp), f(&tm));
        for r in 0..out {
            j[(r, a)] = (fp[r] - fm[r]) / (2.0 * step);
        }
    }
    j
}

/// Projector onto the orthogonal complement of the columns of `t`.
fn normal_projector(t: &DMatrix<f64>) -> Result<DMatrix<f64>, KernelError> {
    let gram = t.transpose() * t;
    let inv = gram.try_inverse().ok_or_else(|| KernelError::Degenerate("chart is not immersive".into()))?;
    Ok(DMatrix::identity(t.nrows(), t.nrows()) - t * inv * t.transpose())
}

/// At the point of `second`, checks `Hess h_ξ(X, Y) = ⟨II(X, Y), ξ⟩` for a
/// normal vector `ξ`. The Hessian is taken in the chart through `second`
/// whose first direction points at `first`; `II` is computed in the affine
/// chart of the largest coordinate and carried over by the chart Jacobian.
/// `normal` holds the coordinates of `ξ` in an orthonormal normal basis
/// (length `k + 3`).
pub fn hessian_continuation_check(
    first: &[Real; 3],
    second: &[Real; 3],
    normal: &[f64],
) -> Result<HessianCheck, KernelError> {
    let k = second[0].dim();
    check_associative(k)?;
    let n = 2 * k;
    let dim = 3 + 3 * k;
    if normal.len() != k + 3 {
        return Err(KernelError::DimensionMismatch(format!("{} normal coordinates, expected {}", normal.len(), k + 3)));
    }
    let q = orthonormal_complement(second, &[]).ok_or_else(|| KernelError::Degenerate("zero vector".into()))?;
    let u1 = orthonormal_complement(first, std::slice::from_ref(&q))
        .ok_or_else(|| KernelError::Degenerate("points span the same line".into()))?;
    let u2 = (0..3)
        .find_map(|m| {
            let e: [Real; 3] = std::array::from_fn(|i| if i == m { Real::one(k) } else { Real::zero(k) });
            orthonormal_complement(&e, &[q.clone(), u1.clone()])
        })
        .expect("three coordinate lines span");
    let dirs = [u1, u2];
    let f1 = |t: &[f64]| point_of(&chart_vector(&q, &dirs, t)).expect("nonzero").real_coordinates();

    // affine chart: Y_m = 1, the other coordinates shifted
    let m = largest_coordinate(&q);
    let qm_inv = q[m].inverse().expect("largest coordinate is nonzero");
    let z: [Real; 3] = std::array::from_fn(|i| q[i].mul(&qm_inv));
    let others: Vec<usize> = (0..3).filter(|&i| i != m).collect();
    let f2 = |w: &[f64]| {
        let y: [Real; 3] = std::array::from_fn(|i| match others.iter().position(|&o| o == i) {
            Some(l) => z[i].add(&Real::new(w[l * k..(l + 1) * k].to_vec()).expect("valid k")),
            None => z[i].clone(),
        });
        point_of(&y).expect("nonzero").real_coordinates()
    };

    let j1 = jacobian(n, dim, 1e-6, &f1);
    let j2 = jacobian(n, dim, 1e-6, &f2);
    let p1 = normal_projector(&j1)?;
    let sym = SymmetricEigen::new(p1.clone());
    let mut idx: Vec<usize> = (0..dim).collect();
    idx.sort_by(|&a, &b| sym.eigenvalues[b].total_cmp(&sym.eigenvalues[a]));
    let mut xi = DVector::zeros(dim);
    for (c, &i) in normal.iter().zip(&idx) {
        xi += sym.eigenvectors.column(i) * *c;
    }

    let hess = finite_difference_hessian(n, HESSIAN_STEP, |t| DVector::from_vec(f1(t)).dot(&xi));
    let gradient = j1.transpose() * &xi;

    // second derivatives of the embedding in the affine chart
    let h = HESSIAN_STEP;
    let p2 = normal_projector(&j2)?;
    let f2v = |w: &[f64]| DVector::from_vec(f2(w));
    let f0 = f2v(&vec![0.0; n]);
    let shifted = |shifts: &[(usize, f64)]| {
        let mut w = vec![0.0; n];
        for &(i, s) in shifts {
            w[i] += s;
        }
        f2v(&w)
    };
    let mut ii2 = vec![vec![0.0; n]; n];
    for c in 0..n {
        for d in c..n {
            let s = if c == d {
                (shifted(&[(c, h)]) - &f0 * 2.0 + shifted(&[(c, -h)])) / (h * h)
            } else {
                (shifted(&[(c, h), (d, h)]) - shifted(&[(c, h), (d, -h)]) - shifted(&[(c, -h), (d, h)])
                    + shifted(&[(c, -h), (d, -h)]))
                    / (4.0 * h * h)
            };
            let v = (&p2 * s).dot(&xi);
            ii2[c][d] = v;
            ii2[d][c] = v;
        }
    }
    let gram = j2.transpose() * &j2;
    let change = gram.try_inverse().ok_or_else(|| KernelError::Degenerate("chart is not immersive".into()))?
        * j2.transpose()
        * &j1;
    let ii2m = DMatrix::from_fn(n, n, |a, b| ii2[a][b]);
    let second_form = change.transpose() * ii2m * &change;

    let mut max_error: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            max_error = max_error.max((hess[(a, b)] - second_form[(a, b)]).abs());
        }
    }
    let rows = |m: &DMatrix<f64>| (0..n).map(|a| (0..n).map(|b| m[(a, b)]).collect()).collect();
    Ok(HessianCheck {
        hessian: rows(&hess),
        second_form: rows(&second_form),
        gradient_norm: gradient.norm(),
        max_error,
        holds: max_error < 1e-6,
    })
}
