//! Comparisons of derived normal-form data with the printed transcriptions.

use std::collections::HashSet;

use tightframe::normal_form::{
    iiihat_constraints, iiihat_relations_along, qmu_from_normal_form, relations_from_qmu, same_span,
    normal_form_rewrite_system,
};
use tightframe::symbolic::{
    differentiate_relation, parse_one_form, parse_polynomial, FormGenerator, OneForm, Polynomial, Rational, Relation,
    ScalarSymbol,
};

use super::printed;

/// Printed `Q_μ` that differ from `Σ q_{αβμ} x_α x_β`.
pub fn quadratic_form_mismatches() -> Vec<usize> {
    let q = qmu_from_normal_form(2).unwrap();
    let x = |a: usize| Polynomial::symbol(ScalarSymbol::aux(a));
    printed::QUADRATIC_FORMS
        .iter()
        .filter(|(mu, text)| {
            let mut derived = Polynomial::zero();
            for a in 1..=4 {
                for b in 1..=4 {
                    derived += &(&x(a) * &x(b)).scale(&q.q(a, b, *mu));
                }
            }
            derived != parse_polynomial(text).unwrap()
        })
        .map(|(mu, _)| *mu)
        .collect()
}

/// Printed rules `ω_{αμ} = …` that differ from the Cartan-lemma rules, and
/// whether the two lists have the same length.
pub fn rule_mismatches() -> (Vec<(usize, usize)>, bool) {
    let derived = relations_from_qmu(&qmu_from_normal_form(2).unwrap());
    let bad = printed::RULES
        .iter()
        .filter(|(r, c, text)| {
            let g = FormGenerator::new(*r, *c);
            let want = parse_one_form(text).unwrap();
            derived.iter().find(|(h, _)| *h == g).map(|(_, f)| f) != Some(&want)
        })
        .map(|(r, c, _)| (*r, *c))
        .collect();
    (bad, derived.len() == printed::RULES.len())
}

/// Normalized coefficient equations of `d(ω_15 - ½ω_1)` in the `k = 2`
/// context.
pub fn first_rule_equations() -> HashSet<Polynomial> {
    let rs = normal_form_rewrite_system(&qmu_from_normal_form(2).unwrap());
    let rel = Relation::new(FormGenerator::new(1, 5), &parse_one_form("1/2*omega_0_1").unwrap()).unwrap();
    let sys = differentiate_relation(&rel, &rs.loaded_matrix(), &rs).unwrap();
    sys.polys().cloned().collect()
}

/// The printed lines with the two corrections applied.
pub fn corrected_first_rule_equations() -> HashSet<Polynomial> {
    let mut lines = printed::FIRST_RULE_EQUATIONS.map(str::to_string);
    for (i, text) in printed::FIRST_RULE_CORRECTIONS {
        lines[i] = text.to_string();
    }
    lines.iter().map(|l| parse_polynomial(l).unwrap().normalized()).collect()
}

/// Indices of printed lines absent from the derived equations.
pub fn printed_lines_missing(derived: &HashSet<Polynomial>) -> Vec<usize> {
    (0..6)
        .filter(|&i| !derived.contains(&parse_polynomial(printed::FIRST_RULE_EQUATIONS[i]).unwrap().normalized()))
        .collect()
}

/// Relations obtained along the printed directions, and the printed
/// constraint set.
pub fn iiihat_replay() -> (Vec<OneForm>, Vec<OneForm>) {
    let q = qmu_from_normal_form(2).unwrap();
    let replay = printed::IIIHAT_DIRECTIONS
        .iter()
        .flat_map(|w| {
            let w: Vec<Rational> = w.iter().map(|&x| Rational::from_integer(x.into())).collect();
            iiihat_relations_along(&q, &w)
        })
        .collect();
    let printed = iiihat_constraints(2).unwrap().iter().map(|r| r.form().clone()).collect();
    (replay, printed)
}

pub fn iiihat_reproduced() -> bool {
    let (replay, printed) = iiihat_replay();
    same_span(&replay, &printed)
}
