use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::FamilyKind;
use crate::lie::algebra::GroupKind;
use crate::pharmonic::MAX_LOG_POWER;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::Subcommand)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    /// Orthonormality, closure and Casimir constant of the Lie algebra basis.
    BasisCheck,
    /// Tension and conformality identities for matrix coefficients.
    LemmaCheck,
    /// Measured eigen-constants of a minor family against the claimed ones.
    FamilyVerify,
    /// Homogeneous polynomial composites of a family.
    CompositeVerify,
    /// Rational quotients of a family as harmonic morphisms.
    MorphismVerify,
    /// Group versus horizontal tension and subgroup invariance.
    QuotientVerify,
    /// Proper p-harmonic functions, symbolically and numerically.
    PharmonicVerify,
    /// Sign flip of the constants at points of the dual group.
    DualVerify,
    /// All checks over a grid of parameters.
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub algebra: f64,
    pub eigen: f64,
    pub morphism: f64,
    pub dual: f64,
    pub crosscheck: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            algebra: 1e-10,
            eigen: 1e-8,
            morphism: 1e-9,
            dual: 1e-6,
            crosscheck: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct RunConfig {
    pub command: CommandKind,
    pub group: GroupKind,
    /// Rank for basis and lemma checks; largest rank of a sweep.
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub flag_blocks: Option<Vec<usize>>,
    pub degree: usize,
    pub order: u32,
    pub samples: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: CommandKind::FamilyVerify,
            group: GroupKind::Unitary,
            n: 2,
            p: 1,
            q: 1,
            flag_blocks: None,
            degree: 2,
            order: 2,
            samples: 50,
            seed: 42,
            tolerances: Tolerances::default(),
            output: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.p == 0 || self.p > self.q {
            return fail(format!("need 1 <= p <= q, got p={}, q={}", self.p, self.q));
        }
        if self.n == 0 {
            return fail("n must be at least 1".into());
        }
        if self.samples == 0 {
            return fail("samples must be at least 1".into());
        }
        if self.degree == 0 {
            return fail("degree must be at least 1".into());
        }
        if self.order == 0 || 2 * self.order - 1 > MAX_LOG_POWER {
            return fail(format!("order must lie in 1..={}", MAX_LOG_POWER.div_ceil(2)));
        }
        let t = &self.tolerances;
        if [t.algebra, t.eigen, t.morphism, t.dual, t.crosscheck]
            .iter()
            .any(|x| !(x.is_finite() && *x > 0.0))
        {
            return fail("tolerances must be positive and finite".into());
        }
        if let Some(blocks) = &self.flag_blocks {
            if blocks.len() < 2 || blocks.contains(&0) {
                return fail(format!("flag blocks {blocks:?} need at least two positive sizes"));
            }
            let total: usize = blocks.iter().sum();
            if 2 * blocks[0] > total {
                return fail(format!("first flag block {} exceeds half of {total}", blocks[0]));
            }
        }
        Ok(())
    }

    pub fn family_kind(&self) -> FamilyKind {
        match self.group {
            GroupKind::Unitary => FamilyKind::ComplexGrassmannian { p: self.p, q: self.q },
            GroupKind::Symplectic => FamilyKind::QuaternionicGrassmannian { p: self.p, q: self.q },
        }
    }

    pub fn blocks(&self) -> Vec<usize> {
        self.flag_blocks.clone().unwrap_or_else(|| vec![self.p, self.q])
    }

    pub fn scope(&self) -> String {
        let group = match self.group {
            GroupKind::Unitary => "u",
            GroupKind::Symplectic => "sp",
        };
        match self.command {
            CommandKind::BasisCheck | CommandKind::LemmaCheck => format!("{group} n={}", self.n),
            CommandKind::QuotientVerify => {
                let blocks = self
                    .blocks()
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(",");
                format!("{group} blocks=({blocks})")
            }
            CommandKind::CompositeVerify | CommandKind::MorphismVerify => {
                format!("{group} p={} q={} d={}", self.p, self.q, self.degree)
            }
            CommandKind::PharmonicVerify | CommandKind::DualVerify => {
                format!("{group} p={} q={} order={}", self.p, self.q, self.order)
            }
            _ => format!("{group} p={} q={}", self.p, self.q),
        }
    }
}
