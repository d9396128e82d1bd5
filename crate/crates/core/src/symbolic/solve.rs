use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::equations::{Equation, EquationSystem};
use super::form::OneForm;
use super::poly::{Polynomial, Rational};
use super::symbol::ScalarSymbol;
use crate::error::KernelError;

/// Solved symbols (fully back-substituted) plus equations left unsolved.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Substitution {
    assignments: BTreeMap<ScalarSymbol, Polynomial>,
    sources: BTreeMap<ScalarSymbol, String>,
    residual: Vec<Equation>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn assignments(&self) -> &BTreeMap<ScalarSymbol, Polynomial> {
        &self.assignments
    }

    pub fn get(&self, s: &ScalarSymbol) -> Option<&Polynomial> {
        self.assignments.get(s)
    }

    /// Provenance of the equation that determined `s`.
    pub fn source(&self, s: &ScalarSymbol) -> Option<&str> {
        self.sources.get(s).map(String::as_str)
    }

    pub fn residual(&self) -> &[Equation] {
        &self.residual
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty() && self.residual.is_empty()
    }

    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        p.substitute(&self.assignments)
    }

    pub fn reduce_form(&self, f: &OneForm) -> OneForm {
        f.substitute(&self.assignments)
    }

    /// No assigned symbol occurs in any right-hand side.
    pub fn is_triangular(&self) -> bool {
        self.assignments.values().all(|p| p.symbols().iter().all(|s| !self.assignments.contains_key(s)))
    }
}

/// Outcome of feeding one equation to a [`LinearSolver`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Solved(ScalarSymbol),
    Redundant,
    /// Not linear in the unknowns with a rational pivot; carries the reduced form.
    Deferred(Polynomial),
}

/// Incremental exact Gaussian elimination.
///
/// Pivots are chosen as the earliest unknown (in the caller's order) that
/// appears linearly with a rational coefficient. Assignments are kept fully
/// reduced, so reducing a polynomial is a single substitution pass.
#[derive(Clone, Debug)]
pub struct LinearSolver {
    priority: HashMap<ScalarSymbol, usize>,
    subst: Substitution,
    // symbol -> assigned symbols whose right-hand side may contain it
    occurs: HashMap<ScalarSymbol, BTreeSet<ScalarSymbol>>,
}

impl LinearSolver {
    pub fn new(unknowns: &[ScalarSymbol]) -> Self {
        let mut priority = HashMap::new();
        for (i, s) in unknowns.iter().enumerate() {
            priority.entry(*s).or_insert(i);
        }
        LinearSolver { priority, subst: Substitution::new(), occurs: HashMap::new() }
    }

    /// Continues from an existing substitution.
    pub fn with_substitution(unknowns: &[ScalarSymbol], subst: Substitution) -> Self {
        let mut solver = Self::new(unknowns);
        for (s, rhs) in &subst.assignments {
            for t in rhs.symbols() {
                solver.occurs.entry(t).or_default().insert(*s);
            }
        }
        solver.subst = subst;
        solver
    }

    pub fn is_unknown(&self, s: &ScalarSymbol) -> bool {
        self.priority.contains_key(s)
    }

    pub fn substitution(&self) -> &Substitution {
        &self.subst
    }

    pub fn into_substitution(self) -> Substitution {
        self.subst
    }

    fn inconsistent(&self, original: &Polynomial, reduced: &Polynomial, provenance: &str) -> KernelError {
        let mut tags = vec![provenance.to_string()];
        for s in original.symbols() {
            if let Some(src) = self.subst.sources.get(&s) {
                if !tags.contains(src) {
                    tags.push(src.clone());
                }
            }
        }
        KernelError::Inconsistent { equation: format!("{original} -> {reduced}"), provenance: tags.join("; ") }
    }

    pub fn add(&mut self, poly: &Polynomial, provenance: &str) -> Result<Step, KernelError> {
        let reduced = self.subst.reduce(poly);
        if reduced.is_zero() {
            return Ok(Step::Redundant);
        }
        if reduced.is_constant() {
            return Err(self.inconsistent(poly, &reduced, provenance));
        }
        let Some((lin, rest)) = reduced.linear_split(|s| self.priority.contains_key(s)) else {
            return Ok(Step::Deferred(reduced));
        };
        let pivot = lin
            .iter()
            .filter_map(|(s, c)| c.as_constant().map(|c| (self.priority[s], *s, c)))
            .min_by_key(|(p, _, _)| *p);
        let Some((_, x, c)) = pivot else {
            return Ok(Step::Deferred(reduced));
        };
        // x = -(reduced - c x) / c
        let mut others = rest;
        for (s, p) in &lin {
            if *s != x {
                others += &(p * &Polynomial::symbol(*s));
            }
        }
        let inv: Rational = -(Rational::from_integer(1.into()) / c);
        let value = others.scale(&inv);
        self.assign(x, value, provenance);
        Ok(Step::Solved(x))
    }

    fn assign(&mut self, x: ScalarSymbol, value: Polynomial, provenance: &str) {
        if let Some(users) = self.occurs.remove(&x) {
            for y in users {
                let rhs = &self.subst.assignments[&y];
                if !rhs.contains(&x) {
                    continue;
                }
                let updated = rhs.substitute_one(&x, &value);
                for t in value.symbols() {
                    self.occurs.entry(t).or_default().insert(y);
                }
                self.subst.assignments.insert(y, updated);
            }
        }
        for t in value.symbols() {
            self.occurs.entry(t).or_default().insert(x);
        }
        self.subst.assignments.insert(x, value);
        self.subst.sources.insert(x, provenance.to_string());
    }
}

/// One elimination pass in equation order. Equations that are not linear in
/// the unknowns (or lack a rational pivot) are returned in the residual as given.
pub fn solve_linear(sys: &EquationSystem, unknowns: &[ScalarSymbol]) -> Result<Substitution, KernelError> {
    let mut solver = LinearSolver::new(unknowns);
    let mut residual = Vec::new();
    for eq in sys.equations() {
        if let Step::Deferred(_) = solver.add(&eq.poly, &eq.provenance)? {
            residual.push(eq.clone());
        }
    }
    let mut subst = solver.into_substitution();
    subst.residual = residual;
    Ok(subst)
}

/// Repeats elimination over the deferred equations until no new pivot
/// appears: substituting solved symbols often linearizes quadratic equations.
/// The residual holds the remaining equations in reduced form.
pub fn solve_iterative(sys: &EquationSystem, unknowns: &[ScalarSymbol]) -> Result<Substitution, KernelError> {
    solve_iterative_from(sys.equations(), unknowns, Substitution::new())
}

/// Like [`solve_iterative`], continuing from a previous substitution.
pub fn solve_iterative_from(
    equations: &[Equation],
    unknowns: &[ScalarSymbol],
    start: Substitution,
) -> Result<Substitution, KernelError> {
    let mut solver = LinearSolver::with_substitution(unknowns, start);
    let mut pending: Vec<Equation> = std::mem::take(&mut solver.subst.residual);
    pending.extend(equations.iter().cloned());
    loop {
        let mut progress = false;
        let mut deferred = Vec::new();
        for eq in pending {
            match solver.add(&eq.poly, &eq.provenance)? {
                Step::Solved(_) => progress = true,
                Step::Redundant => {}
                Step::Deferred(p) => deferred.push(Equation { poly: p, provenance: eq.provenance }),
            }
        }
        pending = deferred;
        if !progress || pending.is_empty() {
            break;
        }
    }
    let mut subst = solver.into_substitution();
    let mut seen = std::collections::HashSet::new();
    subst.residual = pending
        .into_iter()
        .filter_map(|eq| {
            let p = subst.reduce(&eq.poly).normalized();
            (!p.is_zero() && seen.insert(p.clone())).then_some(Equation { poly: p, provenance: eq.provenance })
        })
        .collect();
    Ok(subst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Polynomial {
        Polynomial::symbol(ScalarSymbol::aux(i))
    }

    fn sys(polys: Vec<Polynomial>) -> EquationSystem {
        let mut s = EquationSystem::new();
        for (i, p) in polys.into_iter().enumerate() {
            s.push(p, format!("eq{i}"));
        }
        s
    }

    #[test]
    fn empty_system() {
        let s = solve_linear(&EquationSystem::new(), &[]).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn sum_and_difference_force_zero() {
        let s = solve_linear(&sys(vec![&x(0) + &x(1), &x(0) - &x(1)]), &[ScalarSymbol::aux(0), ScalarSymbol::aux(1)])
            .unwrap();
        assert_eq!(s.get(&ScalarSymbol::aux(0)), Some(&Polynomial::zero()));
        assert_eq!(s.get(&ScalarSymbol::aux(1)), Some(&Polynomial::zero()));
    }

    #[test]
    fn pivot_order_is_respected() {
        let order = [ScalarSymbol::aux(1), ScalarSymbol::aux(0)];
        let s = solve_linear(&sys(vec![&x(0) - &x(1)]), &order).unwrap();
        assert_eq!(s.get(&ScalarSymbol::aux(1)), Some(&x(0)));
        assert!(s.get(&ScalarSymbol::aux(0)).is_none());
    }

    #[test]
    fn inconsistency_names_provenance() {
        let u = [ScalarSymbol::aux(0)];
        let err = solve_linear(&sys(vec![x(0), &x(0) - &Polynomial::int(1)]), &u).unwrap_err();
        match err {
            KernelError::Inconsistent { provenance, .. } => {
                assert!(provenance.contains("eq1") && provenance.contains("eq0"), "{provenance}");
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn nonlinear_goes_to_residual_then_linearizes() {
        let u = [ScalarSymbol::aux(0), ScalarSymbol::aux(1)];
        // x0*x1 + x1 = 0, x0 = 2  ->  x1 = 0
        let s = sys(vec![&(&x(0) * &x(1)) + &x(1), &x(0) - &Polynomial::int(2)]);
        let one = solve_linear(&s, &u).unwrap();
        assert_eq!(one.residual().len(), 1);
        let it = solve_iterative(&s, &u).unwrap();
        assert!(it.residual().is_empty());
        assert_eq!(it.get(&ScalarSymbol::aux(1)), Some(&Polynomial::zero()));
    }

    #[test]
    fn back_substitution_is_complete() {
        let u: Vec<_> = (0..3).map(ScalarSymbol::aux).collect();
        // x0 = x1 + x2, x1 = x2 + 1
        let s = solve_linear(
            &sys(vec![&x(0) - &(&x(1) + &x(2)), &x(1) - &(&x(2) + &Polynomial::int(1))]),
            &u,
        )
        .unwrap();
        assert!(s.is_triangular());
        assert_eq!(s.get(&u[0]), Some(&(&x(2).scale(&Rational::from_integer(2.into())) + &Polynomial::int(1))));
    }
}
