use std::collections::BTreeMap;

use super::connection::{ConnectionMatrix, DarbouxContext};
use super::form::{wedge, FormGenerator, OneForm, TwoForm};
use super::poly::Polynomial;
use super::symbol::ScalarSymbol;
use crate::error::KernelError;

/// Known relations `generator = basis span`, plus generic expansion
/// `ω_{jk} = Σ_i b^i_{jk} ω_i` for everything else.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteSystem {
    ctx: DarbouxContext,
    rules: BTreeMap<FormGenerator, OneForm>,
    generic_default: bool,
    generic_overrides: BTreeMap<FormGenerator, bool>,
}

impl RewriteSystem {
    /// No rules; every non-basis generator expands generically.
    pub fn new(ctx: DarbouxContext) -> Self {
        RewriteSystem { ctx, rules: BTreeMap::new(), generic_default: true, generic_overrides: BTreeMap::new() }
    }

    /// No rules and generic expansion disabled everywhere.
    pub fn strict(ctx: DarbouxContext) -> Self {
        RewriteSystem { generic_default: false, ..Self::new(ctx) }
    }

    pub fn context(&self) -> DarbouxContext {
        self.ctx
    }

    pub fn add_rule(&mut self, g: FormGenerator, rhs: OneForm) -> Result<(), KernelError> {
        self.ctx.check(g)?;
        if g.is_basis(self.ctx.n) || self.ctx.is_darboux_zero(g) {
            return Err(KernelError::UnsupportedRelation(format!("{g} cannot carry a rule")));
        }
        if !rhs.is_basis_span(self.ctx.n) {
            return Err(KernelError::NotBasisSpan(rhs.to_string()));
        }
        self.rules.insert(g, rhs);
        Ok(())
    }

    pub fn with_rules(mut self, rules: impl IntoIterator<Item = (FormGenerator, OneForm)>) -> Result<Self, KernelError> {
        for (g, rhs) in rules {
            self.add_rule(g, rhs)?;
        }
        Ok(self)
    }

    pub fn rule(&self, g: &FormGenerator) -> Option<&OneForm> {
        self.rules.get(g)
    }

    pub fn rules(&self) -> &BTreeMap<FormGenerator, OneForm> {
        &self.rules
    }

    pub fn set_generic(&mut self, g: FormGenerator, enabled: bool) {
        self.generic_overrides.insert(g, enabled);
    }

    pub fn generic_enabled(&self, g: &FormGenerator) -> bool {
        self.generic_overrides.get(g).copied().unwrap_or(self.generic_default)
    }

    /// `Σ_i b^i_{jk} ω_i`.
    pub fn generic_expansion(&self, g: FormGenerator) -> OneForm {
        let mut f = OneForm::zero();
        for i in self.ctx.tangent() {
            f.add_term(FormGenerator::basis(i), &Polynomial::symbol(ScalarSymbol::b(g.row(), g.col(), i)));
        }
        f
    }

    pub fn expand_generator(&self, g: FormGenerator) -> Result<OneForm, KernelError> {
        self.ctx.check(g)?;
        if g.is_basis(self.ctx.n) {
            return Ok(OneForm::generator(g));
        }
        if self.ctx.is_darboux_zero(g) {
            return Ok(OneForm::zero());
        }
        if let Some(rhs) = self.rules.get(&g) {
            return Ok(rhs.clone());
        }
        if self.generic_enabled(&g) {
            return Ok(self.generic_expansion(g));
        }
        Err(KernelError::NoRule(g.to_string()))
    }

    /// The Darboux matrix with every ruled entry replaced by its rule.
    pub fn loaded_matrix(&self) -> ConnectionMatrix {
        let mut m = ConnectionMatrix::darboux(self.ctx);
        for (g, rhs) in &self.rules {
            m.set(g.row(), g.col(), rhs.clone());
        }
        m
    }

    pub fn expand_one(&self, f: &OneForm) -> Result<OneForm, KernelError> {
        let mut out = OneForm::zero();
        for (g, p) in f.terms() {
            out.add_scaled(&self.expand_generator(*g)?, p);
        }
        Ok(out)
    }

    pub fn expand_two(&self, t: &TwoForm) -> Result<TwoForm, KernelError> {
        let mut cache: BTreeMap<FormGenerator, OneForm> = BTreeMap::new();
        let mut get = |g: FormGenerator| -> Result<OneForm, KernelError> {
            if let Some(f) = cache.get(&g) {
                return Ok(f.clone());
            }
            let f = self.expand_generator(g)?;
            cache.insert(g, f.clone());
            Ok(f)
        };
        let mut out = TwoForm::zero();
        for (pair, p) in t.terms() {
            let (a, b) = (get(pair.0)?, get(pair.1)?);
            out.add_scaled(&wedge(&a, &b), p);
        }
        Ok(out)
    }
}
