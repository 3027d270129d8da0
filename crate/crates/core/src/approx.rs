//! Named approximations to the exact coherence factor.
//!
//! Each approximation is a trait object in [`ApproxRegistry`], looked up by
//! name at runtime (the CLI `--approx` flag goes straight through here).

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::echo::InitialState;
use crate::error::{param, Result};
use crate::gaussian::{
    envelope_model, strong_simplified_series, walk_stats, weak_gaussian_f, EnvelopeMethod, WidthMethod,
};
use crate::spectrum::{ChainSpec, FieldSet};

pub trait Approximation: Send + Sync {
    /// Registry key.
    fn name(&self) -> &'static str;
    /// CSV column header.
    fn column(&self) -> &'static str;
    fn evaluate(&self, chain: &ChainSpec, fields: &FieldSet, init: &InitialState, times: &[f64]) -> Result<Vec<f64>>;
}

fn require_ground(name: &str, init: &InitialState) -> Result<()> {
    match init {
        InitialState::Ground => Ok(()),
        InitialState::Thermal { .. } => param(format!("approximation '{name}' assumes a ground-state chain")),
    }
}

struct WalkGaussian {
    name: &'static str,
    column: &'static str,
    method: WidthMethod,
}

impl Approximation for WalkGaussian {
    fn name(&self) -> &'static str {
        self.name
    }

    fn column(&self) -> &'static str {
        self.column
    }

    fn evaluate(&self, chain: &ChainSpec, fields: &FieldSet, init: &InitialState, times: &[f64]) -> Result<Vec<f64>> {
        require_ground(self.name, init)?;
        let s2 = walk_stats(chain, fields, self.method)?.s2;
        Ok(times.iter().map(|&t| weak_gaussian_f(t, s2)).collect())
    }
}

struct Envelope;

impl Approximation for Envelope {
    fn name(&self) -> &'static str {
        "envelope"
    }

    fn column(&self) -> &'static str {
        "F_envelope"
    }

    fn evaluate(&self, chain: &ChainSpec, fields: &FieldSet, init: &InitialState, times: &[f64]) -> Result<Vec<f64>> {
        require_ground(self.name(), init)?;
        let method = if chain.is_ising() { EnvelopeMethod::ClosedIsing } else { EnvelopeMethod::Direct };
        let env = envelope_model(chain, fields, method)?;
        Ok(times.par_iter().map(|&t| env.value(t)).collect())
    }
}

struct StrongTwoTerm;

impl Approximation for StrongTwoTerm {
    fn name(&self) -> &'static str {
        "strong_simplified"
    }

    fn column(&self) -> &'static str {
        "F_strong"
    }

    fn evaluate(&self, chain: &ChainSpec, fields: &FieldSet, init: &InitialState, times: &[f64]) -> Result<Vec<f64>> {
        require_ground(self.name(), init)?;
        strong_simplified_series(chain, fields, times)
    }
}

#[derive(Clone, Default)]
pub struct ApproxRegistry {
    entries: BTreeMap<&'static str, Arc<dyn Approximation>>,
}

impl ApproxRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `weak`, `closed`, `envelope` and `strong_simplified`.
    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Arc::new(WalkGaussian { name: "weak", column: "F_weak", method: WidthMethod::Leading }));
        r.register(Arc::new(WalkGaussian { name: "closed", column: "F_closed", method: WidthMethod::ClosedIsing }));
        r.register(Arc::new(Envelope));
        r.register(Arc::new(StrongTwoTerm));
        r
    }

    /// Adds or replaces the entry under `a.name()`.
    pub fn register(&mut self, a: Arc<dyn Approximation>) {
        self.entries.insert(a.name(), a);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn Approximation>> {
        self.entries.get(name).cloned()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

impl std::fmt::Debug for ApproxRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.entries.keys()).finish()
    }
}
