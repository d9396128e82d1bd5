//! Property checks shared by the property suite and the acceptance run.

#![allow(dead_code)]

pub mod printed;
pub mod transcriptions;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use tightframe::linalg;
use tightframe::symbolic::connection::second_differential;
use tightframe::symbolic::{
    apply_frame_change, rat, solve_linear, wedge, ConnectionMatrix, DarbouxContext, EquationSystem, FormGenerator,
    FrameChange, OneForm, Polynomial, Rational, ScalarSymbol,
};
use tightframe::KernelError;

pub fn one_form(dim: usize) -> impl Strategy<Value = OneForm> {
    prop::collection::vec((0..dim, 0..dim, -4i64..=4), 0..6).prop_map(|terms| {
        let mut f = OneForm::zero();
        for (r, c, x) in terms {
            f.add_term(FormGenerator::new(r, c), &Polynomial::int(x));
        }
        f
    })
}

/// `d² = 0` on one generator of a generic matrix of size `big_n + 1`.
pub fn d_squared(big_n: usize, row: usize, col: usize) -> Result<(), TestCaseError> {
    let g = FormGenerator::new(row % (big_n + 1), col % (big_n + 1));
    let generic = ConnectionMatrix::generic(big_n + 1);
    prop_assert!(second_differential(&generic, g).unwrap().is_zero(), "{g:?}");
    Ok(())
}

pub fn wedge_laws(f: &OneForm, g: &OneForm, h: &OneForm, c: i64) -> Result<(), TestCaseError> {
    let mut sum = wedge(f, g);
    sum.add(&wedge(g, f));
    prop_assert!(sum.is_zero());
    prop_assert!(wedge(f, f).is_zero());
    let c = Polynomial::int(c);
    let mut lhs_form = f.clone();
    lhs_form.add_scaled(h, &c);
    let lhs = wedge(&lhs_form, g);
    let mut rhs = wedge(f, g);
    rhs.add_scaled(&wedge(h, g), &c);
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

/// Strictly lower shifts below the top row, so `A_0` is never moved.
pub fn shifts(dim: usize) -> impl Strategy<Value = Vec<((usize, usize), i64, bool)>> {
    prop::collection::vec((1..dim, 0..dim, -3i64..=3, any::<bool>()), 0..5).prop_map(|v| {
        v.into_iter().filter(|(j, k, _, _)| k < j).map(|(j, k, c, p)| ((j, k), c, p)).collect()
    })
}

fn frame_change(dim: usize, shifts: &[((usize, usize), i64, bool)]) -> FrameChange {
    FrameChange::from_shifts(
        dim,
        shifts.iter().map(|&((j, k), c, symbolic)| {
            let p = if symbolic { Polynomial::symbol(ScalarSymbol::param(j, k)) } else { Polynomial::one() };
            ((j, k), p.scale(&Rational::from_integer(c.into())))
        }),
    )
    .unwrap()
}

/// `Ω` is fixed by the identity, and applying `T₁` then `T₂` equals applying
/// `T₂T₁` once.
pub fn frame_laws(
    first: &[((usize, usize), i64, bool)],
    second: &[((usize, usize), i64, bool)],
) -> Result<(), TestCaseError> {
    let omega = ConnectionMatrix::darboux(DarbouxContext::new(2, 4));
    let dim = omega.dim();
    prop_assert_eq!(apply_frame_change(&omega, &FrameChange::identity(dim)).unwrap(), omega.clone());
    let t1 = frame_change(dim, first);
    let t2 = frame_change(dim, second);
    let stepwise = apply_frame_change(&apply_frame_change(&omega, &t1).unwrap(), &t2).unwrap();
    let once = apply_frame_change(&omega, &t1.then(&t2).unwrap()).unwrap();
    prop_assert_eq!(stepwise, once);
    Ok(())
}

pub fn linear_system(unknowns: usize) -> impl Strategy<Value = (Vec<Vec<i64>>, bool)> {
    (prop::collection::vec(prop::collection::vec(-3i64..=3, unknowns + 1), 1..8), any::<bool>())
}

/// Rows are `[c_1, .., c_u, c_0]` for `Σ c_i b_i + c_0 = 0`. When
/// `consistent`, `c_0` is overwritten from the solution `b_i = i`.
pub fn solver_soundness(rows: &[Vec<i64>], consistent: bool) -> Result<(), TestCaseError> {
    let u = rows[0].len() - 1;
    let unknowns: Vec<ScalarSymbol> = (0..u).map(|i| ScalarSymbol::b(1, i + 2, 1)).collect();
    let mut rows: Vec<Vec<i64>> = rows.to_vec();
    if consistent {
        for r in rows.iter_mut() {
            r[u] = -(0..u).map(|i| r[i] * i as i64).sum::<i64>();
        }
    }
    let mut sys = EquationSystem::new();
    for (n, r) in rows.iter().enumerate() {
        let mut p = Polynomial::int(r[u]);
        for (i, s) in unknowns.iter().enumerate() {
            p += &Polynomial::symbol(*s).scale(&rat(r[i], 1));
        }
        sys.push(p, format!("row {n}"));
    }
    let exact: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect();
    let coeffs: Vec<Vec<Rational>> = exact.iter().map(|r| r[..u].to_vec()).collect();
    let solvable = linalg::rank(&coeffs) == linalg::rank(&exact);
    match solve_linear(&sys, &unknowns) {
        Ok(sigma) => {
            prop_assert!(solvable);
            for p in sys.polys() {
                prop_assert!(sigma.reduce(p).is_zero(), "{p} leaves {}", sigma.reduce(p));
            }
        }
        Err(KernelError::Inconsistent { .. }) => prop_assert!(!solvable),
        Err(e) => return Err(TestCaseError::fail(e.to_string())),
    }
    if consistent {
        prop_assert!(solvable);
    }
    Ok(())
}
