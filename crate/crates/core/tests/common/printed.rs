//! Printed normal-form data for `k = 2`, transcribed verbatim. Basis forms
//! `ω_α` are `omega_0_α`; in the quadratic forms `ω_α` is written `x_α`;
//! `b_{jk}^l` is `b_j_k_l`.

/// `(μ, Q_μ)`.
pub const QUADRATIC_FORMS: [(usize, &str); 4] = [
    (5, "1/2*(x_1^2 + x_2^2)"),
    (6, "1/2*(x_1*x_3 + x_3*x_1 + x_2*x_4 + x_4*x_2)"),
    (7, "1/2*(x_1*x_4 + x_4*x_1 - x_2*x_3 - x_3*x_2)"),
    (8, "1/2*(x_3^2 + x_4^2)"),
];

/// `(row, col, right-hand side)` of `ω_{αμ} = …`.
pub const RULES: [(usize, usize, &str); 16] = [
    (1, 5, "1/2*omega_0_1"),
    (1, 6, "1/2*omega_0_3"),
    (1, 7, "1/2*omega_0_4"),
    (1, 8, "0"),
    (2, 5, "1/2*omega_0_2"),
    (2, 6, "1/2*omega_0_4"),
    (2, 7, "-1/2*omega_0_3"),
    (2, 8, "0"),
    (3, 5, "0"),
    (3, 6, "1/2*omega_0_1"),
    (3, 7, "-1/2*omega_0_2"),
    (3, 8, "1/2*omega_0_3"),
    (4, 5, "0"),
    (4, 6, "1/2*omega_0_2"),
    (4, 7, "1/2*omega_0_1"),
    (4, 8, "1/2*omega_0_4"),
];

/// Coefficients of `ω_1∧ω_2, ω_1∧ω_3, ω_1∧ω_4, ω_2∧ω_3, ω_2∧ω_4, ω_3∧ω_4` in
/// `d(ω_15 - ½ω_1)`, as printed.
pub const FIRST_RULE_EQUATIONS: [&str; 6] = [
    "-b_0_0_2 + 2*b_1_1_2 - b_5_5_2 - b_2_1_1 - b_1_2_1",
    "-b_0_0_3 + 2*b_1_1_3 - b_5_5_3 + b_6_5_2 - b_3_1_2",
    "-b_0_0_4 + 2*b_1_1_4 - b_5_5_4 + b_7_5_1 - b_4_1_1",
    "b_2_1_3 + b_1_2_3 + b_6_5_2 + b_3_1_2",
    "b_2_1_4 + b_1_2_4 + b_7_5_2 - b_4_1_2",
    "-b_6_5_4 + b_3_1_4 + b_7_5_3 - b_4_1_3",
];

/// The second and fourth lines as the expansion actually gives them.
pub const FIRST_RULE_CORRECTIONS: [(usize, &str); 2] = [
    (1, "-b_0_0_3 + 2*b_1_1_3 - b_5_5_3 + b_6_5_1 - b_3_1_1"),
    (3, "b_2_1_3 + b_1_2_3 + b_6_5_2 - b_3_1_2"),
];

/// Directions `w` used for the refined third fundamental form: the four
/// basis vectors and `v_1 + v_3, v_1 + v_4, v_2 + v_3`.
pub const IIIHAT_DIRECTIONS: [[i64; 4]; 7] = [
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, 0, 1, 0],
    [0, 0, 0, 1],
    [1, 0, 1, 0],
    [1, 0, 0, 1],
    [0, 1, 1, 0],
];

pub const PRINTED_EQUATION_COUNT: usize = 96;
pub const PRINTED_FINAL_COUNT: usize = 150;
pub const PRINTED_K8_COUNT: usize = 19200;
