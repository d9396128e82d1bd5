//! Stage data for `k = 2`: the four frame changes, their published
//! parameters, the final relation list, and the display matrices.

use crate::error::KernelError;
use crate::symbolic::{parse_one_form, parse_polynomial, OneForm, Polynomial, Relation, ScalarSymbol};

use super::{ChangeShape, Stage, StageSpec};

fn rel(text: &str) -> Relation {
    let form = parse_one_form(text).expect("well-formed relation");
    Relation::from_form(format!("{text} = 0"), form).expect("constant coefficients")
}

fn poly(text: &str) -> Polynomial {
    parse_polynomial(text).expect("well-formed polynomial")
}

fn a(j: usize) -> ScalarSymbol {
    ScalarSymbol::param(j, 0)
}

/// Published `a_2` with the sign of its first term flipped; the printed
/// value does not satisfy the block targets.
pub const A2_CORRECTED: &str =
    "-b_4_1_1 - 2*b_7_7_4 - b_0_0_4 + b_8_8_4 + 2*b_2_2_4 - b_3_2_1 + b_0_0_2 - 2*b_4_4_2 + b_8_8_2";

pub const A2_PRINTED: &str =
    "b_4_1_1 - 2*b_7_7_4 - b_0_0_4 + b_8_8_4 + 2*b_2_2_4 - b_3_2_1 + b_0_0_2 - 2*b_4_4_2 + b_8_8_2";

/// Tangent shift making the `(1,3)-(2,4)` and `(3,1)-(4,2)` minors
/// anti-symmetric.
pub fn change1() -> StageSpec {
    StageSpec {
        stage: Stage::AfterChange1,
        label: "change 1".into(),
        shape: ChangeShape::TangentShift,
        shifts: (1..=4).map(|j| ((j, 0), a(j))).collect(),
        targets: vec![
            rel("omega_1_3 - omega_2_4"),
            rel("omega_1_4 + omega_2_3"),
            rel("omega_3_1 - omega_4_2"),
            rel("omega_4_1 + omega_3_2"),
        ],
        preserve_all: false,
        published: vec![
            (a(1), poly("b_0_0_1 + 2*b_7_7_1 - b_8_8_1 - 2*b_2_2_1 - b_7_7_3 + b_6_6_3")),
            (a(2), poly(A2_PRINTED)),
            (a(3), poly("b_0_0_3 + b_7_7_3 + b_6_6_3 - 2*b_2_2_3 - b_8_8_3")),
            (a(4), poly("-b_4_1_1 - b_3_2_1")),
        ],
    }
}

/// Normal vectors mixed with tangent ones so that `ω_66 = ω_77` while
/// keeping everything already known.
pub fn change2() -> StageSpec {
    let mut shifts = Vec::new();
    for mu in 5..=8 {
        for k in 1..=4 {
            shifts.push(((mu, k), ScalarSymbol::param(mu, k)));
        }
    }
    StageSpec {
        stage: Stage::AfterChange2,
        label: "change 2".into(),
        shape: ChangeShape::NormalMix,
        shifts,
        targets: vec![rel("omega_6_6 - omega_7_7")],
        preserve_all: true,
        published: Vec::new(),
    }
}

/// Shifts of `A_5` and `A_8` clearing `(5,3), (5,4), (8,1), (8,2)`.
pub fn change3() -> StageSpec {
    StageSpec {
        stage: Stage::AfterChange3,
        label: "change 3".into(),
        shape: ChangeShape::VectorShift,
        shifts: vec![((5, 0), a(5)), ((8, 0), a(8))],
        targets: vec![rel("omega_5_3"), rel("omega_5_4"), rel("omega_8_1"), rel("omega_8_2")],
        preserve_all: false,
        published: vec![(a(5), poly("2*b_1_0_1 - 2*b_7_4_1")), (a(8), poly("2*b_4_0_4 - 2*b_6_2_4"))],
    }
}

/// Shifts of `A_6` and `A_7` bringing the `(6,3)-(7,4)` minor to the
/// standard shape.
pub fn change4() -> StageSpec {
    StageSpec {
        stage: Stage::AfterChange4,
        label: "change 4".into(),
        shape: ChangeShape::VectorShift,
        shifts: vec![((6, 0), a(6)), ((7, 0), a(7))],
        targets: vec![
            rel("omega_6_3 - omega_1_0"),
            rel("omega_6_4 - omega_2_0"),
            rel("omega_7_3 + omega_2_0"),
            rel("omega_7_4 - omega_1_0"),
        ],
        preserve_all: false,
        published: vec![(a(6), poly("2*b_4_0_2 - b_8_4_2")), (a(7), poly("2*b_4_0_1 - b_8_4_1"))],
    }
}

pub fn stages() -> Vec<StageSpec> {
    vec![change1(), change2(), change3(), change4()]
}

/// The relation list differentiated in the last step, as printed except for
/// two entries: `ω_41 - ω_66` is read as `ω_41 - ω_75` and `ω_71 + ω_62` as
/// `ω_71 - ω_62`, matching the final matrix.
pub fn final_relations() -> Vec<Relation> {
    [
        "omega_1_3 - omega_2_4",
        "omega_2_3 + omega_1_4",
        "omega_3_1 - omega_4_2",
        "omega_3_2 + omega_4_1",
        "omega_1_1 - omega_2_2",
        "omega_1_2 + omega_2_1",
        "omega_3_3 - omega_4_4",
        "omega_3_4 + omega_4_3",
        "omega_6_6 - omega_7_7",
        "omega_6_7 + omega_7_6",
        "omega_3_1 - omega_6_5",
        "omega_4_1 - omega_7_5",
        "2*omega_3_1 - omega_8_6",
        "2*omega_4_1 - omega_8_7",
        "omega_1_3 - omega_6_8",
        "omega_1_4 - omega_7_8",
        "2*omega_1_3 - omega_5_6",
        "2*omega_1_4 - omega_5_7",
        "omega_5_3",
        "omega_5_4",
        "omega_8_1",
        "omega_8_2",
        "omega_6_3 - omega_7_4",
        "omega_7_3 + omega_6_4",
        "omega_6_1 + omega_7_2",
        "omega_7_1 - omega_6_2",
    ]
    .iter()
    .map(|t| rel(t))
    .collect()
}

/// The two list entries as printed.
pub fn final_relations_printed_variants() -> Vec<Relation> {
    vec![rel("omega_4_1 - omega_6_6"), rel("omega_7_1 + omega_6_2")]
}

fn display(rows: [[&str; 9]; 9]) -> Result<Vec<Vec<OneForm>>, KernelError> {
    rows.iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(c, t)| match *t {
                    "*" => parse_one_form(&format!("omega_{r}_{c}")),
                    t => parse_one_form(t),
                })
                .collect()
        })
        .collect()
}

const H1: &str = "1/2*omega_0_1";
const H2: &str = "1/2*omega_0_2";
const H3: &str = "1/2*omega_0_3";
const H4: &str = "1/2*omega_0_4";
const MH2: &str = "-1/2*omega_0_2";
const MH3: &str = "-1/2*omega_0_3";

/// The matrix after the third change; `*` is the entry's own generator.
pub fn matrix_after_change3() -> Vec<Vec<OneForm>> {
    display([
        ["*", "omega_0_1", "omega_0_2", "omega_0_3", "omega_0_4", "0", "0", "0", "0"],
        ["*", "*", "*", "*", "*", H1, H3, H4, "0"],
        ["*", "-omega_1_2", "omega_1_1", "-omega_1_4", "omega_1_3", H2, H4, MH3, "0"],
        ["*", "*", "*", "*", "*", "0", H1, MH2, H3],
        ["*", "-omega_3_2", "omega_3_1", "-omega_3_4", "omega_3_3", "0", H2, H1, H4],
        ["*", "*", "*", "0", "0", "*", "2*omega_1_3", "2*omega_1_4", "0"],
        ["*", "*", "*", "*", "*", "omega_3_1", "*", "*", "omega_1_3"],
        ["*", "*", "*", "*", "*", "-omega_3_2", "-omega_6_7", "omega_6_6", "omega_1_4"],
        ["*", "0", "0", "*", "*", "0", "2*omega_3_1", "-2*omega_3_2", "*"],
    ])
    .expect("well-formed display")
}

/// The final matrix in terms of the surviving forms.
pub fn final_matrix() -> Vec<Vec<OneForm>> {
    display([
        ["*", "omega_0_1", "omega_0_2", "omega_0_3", "omega_0_4", "0", "0", "0", "0"],
        ["*", "*", "*", "*", "*", H1, H3, H4, "0"],
        ["*", "-omega_1_2", "omega_1_1", "-omega_1_4", "omega_1_3", H2, H4, MH3, "0"],
        ["*", "*", "*", "*", "*", "0", H1, MH2, H3],
        ["*", "-omega_3_2", "omega_3_1", "-omega_3_4", "omega_3_3", "0", H2, H1, H4],
        ["0", "2*omega_1_0", "2*omega_2_0", "0", "0", "*", "2*omega_1_3", "2*omega_1_4", "0"],
        ["0", "omega_3_0", "omega_4_0", "omega_1_0", "omega_2_0", "omega_3_1", "*", "*", "omega_1_3"],
        ["0", "omega_4_0", "-omega_3_0", "-omega_2_0", "omega_1_0", "-omega_3_2", "-omega_6_7", "omega_6_6", "omega_1_4"],
        ["0", "0", "0", "2*omega_3_0", "2*omega_4_0", "0", "2*omega_3_1", "-2*omega_3_2", "*"],
    ])
    .expect("well-formed display")
}
