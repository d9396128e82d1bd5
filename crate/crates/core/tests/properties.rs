mod common;

use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_squared_vanishes(big_n in prop::sample::select(vec![5usize, 8, 14]), row in 0usize..15, col in 0usize..15) {
        common::d_squared(big_n, row, col)?;
    }

    #[test]
    fn wedge_is_antisymmetric_and_bilinear(
        f in common::one_form(6),
        g in common::one_form(6),
        h in common::one_form(6),
        c in -5i64..=5,
    ) {
        common::wedge_laws(&f, &g, &h, c)?;
    }

    #[test]
    fn frame_changes_compose(first in common::shifts(5), second in common::shifts(5)) {
        common::frame_laws(&first, &second)?;
    }

    #[test]
    fn solver_is_sound((rows, consistent) in common::linear_system(5)) {
        common::solver_soundness(&rows, consistent)?;
    }
}

#[test]
fn d_squared_on_every_generator() {
    use tightframe::symbolic::connection::second_differential;
    use tightframe::symbolic::{ConnectionMatrix, FormGenerator};
    for big_n in [5, 8, 14] {
        let m = ConnectionMatrix::generic(big_n + 1);
        for r in 0..=big_n {
            for c in 0..=big_n {
                assert!(second_differential(&m, FormGenerator::new(r, c)).unwrap().is_zero(), "N = {big_n}: ({r}, {c})");
            }
        }
    }
}
