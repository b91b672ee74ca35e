use std::collections::BTreeMap;

use super::{KernelKind, KernelSpec, Mala, MetropolisKernel, Rwm};
use crate::error::{Error, Result};

pub type KernelBuilder = fn(f64) -> Box<dyn MetropolisKernel>;

/// Metropolis kernels keyed by name.
pub struct KernelRegistry {
    builders: BTreeMap<String, KernelBuilder>,
}

impl KernelRegistry {
    pub fn empty() -> Self {
        Self {
            builders: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register(KernelKind::Rwm.as_str(), |h| Box::new(Rwm::new(h)));
        reg.register(KernelKind::Mala.as_str(), |h| Box::new(Mala::new(h)));
        reg
    }

    pub fn register(&mut self, name: &str, builder: KernelBuilder) {
        self.builders.insert(name.to_ascii_lowercase(), builder);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.builders.keys().map(String::as_str)
    }

    pub fn build(&self, name: &str, step_h: f64) -> Result<Box<dyn MetropolisKernel>> {
        let builder = self.builders.get(&name.to_ascii_lowercase()).ok_or_else(|| Error::UnknownName {
            kind: "kernel",
            name: name.to_string(),
            known: self.names().collect::<Vec<_>>().join(", "),
        })?;
        // validates h
        KernelSpec::new(KernelKind::Rwm, step_h)?;
        Ok(builder(step_h))
    }
}
