//! Inner-product spaces with families of cyclic or symmetric tensors.

mod format;
mod metric;
pub mod quadrature;
pub mod random;
mod tensor;
pub mod wick;

use std::collections::BTreeMap;
use std::fmt;

pub use format::{parse_algebra, write_algebra};
pub use metric::Metric;
pub use tensor::{
    check_invariance, index_tuples, lower_slot, raise_slot, rotate_tensor, rotate_tensor_leftwards,
    Tensor,
};
pub use wick::{gaussian_moment, MomentTable, Polynomial};

use crate::error::{Error, Result};
use crate::graph::Decoration;

/// Invariance class of the interaction tensors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Cyclic,
    Symmetric,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Cyclic => "cyclic",
            Kind::Symmetric => "symmetric",
        })
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cyclic" => Ok(Kind::Cyclic),
            "symmetric" => Ok(Kind::Symmetric),
            other => Err(Error::domain(format!("unknown algebra kind `{other}`"))),
        }
    }
}

/// Arity and optional label of a tensor in the family. Labeled tensors sit
/// on vertices decorated `label:α`, or `genus:g` in modular expansions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorKey {
    pub arity: usize,
    pub label: Option<u32>,
}

impl TensorKey {
    pub fn plain(arity: usize) -> Self {
        TensorKey { arity, label: None }
    }

    pub fn labeled(arity: usize, label: u32) -> Self {
        TensorKey {
            arity,
            label: Some(label),
        }
    }

    /// The key a vertex of this valence and decoration reads its tensor
    /// from. Special vertices use the plain tensor.
    pub fn for_vertex(valence: usize, decoration: Decoration) -> Self {
        match decoration {
            Decoration::Ordinary | Decoration::Special => Self::plain(valence),
            Decoration::Label(a) | Decoration::Genus(a) => Self::labeled(valence, a),
        }
    }
}

impl fmt::Display for TensorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={}", self.arity)?;
        if let Some(a) = self.label {
            write!(f, " label={a}")?;
        }
        Ok(())
    }
}

/// `(V, g, T_1, T_2, ...)` with every tensor invariant for its kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymAlgebra {
    metric: Metric,
    kind: Kind,
    tensors: BTreeMap<TensorKey, Tensor>,
}

impl SymAlgebra {
    pub fn new(metric: Metric, kind: Kind) -> Self {
        SymAlgebra {
            metric,
            kind,
            tensors: BTreeMap::new(),
        }
    }

    pub fn with_tensor(mut self, key: TensorKey, t: Tensor) -> Result<Self> {
        self.insert(key, t)?;
        Ok(self)
    }

    pub fn insert(&mut self, key: TensorKey, t: Tensor) -> Result<()> {
        if t.dim() != self.dim() || t.arity() != key.arity {
            return Err(Error::domain(format!(
                "tensor {key} has dimension {} and arity {}, expected dimension {}",
                t.dim(),
                t.arity(),
                self.dim()
            )));
        }
        if let Err(w) = check_invariance(&t, self.kind) {
            let w: Vec<usize> = w.iter().map(|i| i + 1).collect();
            return Err(Error::domain(format!(
                "tensor {key} is not {} (violated at index {w:?})",
                self.kind
            )));
        }
        self.tensors.insert(key, t);
        Ok(())
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn tensor(&self, key: TensorKey) -> Option<&Tensor> {
        self.tensors.get(&key)
    }

    pub fn tensors(&self) -> impl Iterator<Item = (&TensorKey, &Tensor)> {
        self.tensors.iter()
    }

    /// Tensor for a vertex, or a configuration error naming the missing key.
    pub fn tensor_for(&self, valence: usize, decoration: Decoration) -> Result<&Tensor> {
        let key = TensorKey::for_vertex(valence, decoration);
        self.tensors.get(&key).ok_or_else(|| {
            Error::Configuration(format!("no tensor {key} for a {decoration} vertex"))
        })
    }

    pub fn max_arity(&self) -> usize {
        self.tensors.keys().map(|k| k.arity).max().unwrap_or(0)
    }
}
