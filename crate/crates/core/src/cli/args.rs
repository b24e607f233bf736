use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use super::config::{CommandKind, RunConfig, Tolerances};
use crate::lie::algebra::GroupKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroupArg {
    U,
    Sp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(
    name = "ghlab",
    version,
    about = "Verify eigenfamilies, harmonic morphisms and p-harmonic functions on U(n) and Sp(n)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandKind,
    #[arg(long, global = true, value_enum, default_value = "u")]
    pub group: GroupArg,
    #[arg(long, global = true, default_value_t = 2)]
    pub n: usize,
    #[arg(long, global = true, default_value_t = 1)]
    pub p: usize,
    #[arg(long, global = true, default_value_t = 1)]
    pub q: usize,
    /// Comma-separated block sizes, e.g. 1,1,2.
    #[arg(long, global = true, value_delimiter = ',')]
    pub flag_blocks: Option<Vec<usize>>,
    #[arg(long, global = true, default_value_t = 2)]
    pub degree: usize,
    #[arg(long, global = true, default_value_t = 2)]
    pub order: u32,
    #[arg(long, global = true, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, global = true, env = "GHLAB_SEED", default_value_t = 42)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol_algebra: f64,
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_eigen: f64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_morphism: f64,
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol_dual: f64,
    #[arg(long, global = true, default_value_t = 1e-4)]
    pub tol_crosscheck: f64,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: OutputFormat,
}

impl Cli {
    pub fn to_config(&self) -> RunConfig {
        RunConfig {
            command: self.command,
            group: match self.group {
                GroupArg::U => GroupKind::Unitary,
                GroupArg::Sp => GroupKind::Symplectic,
            },
            n: self.n,
            p: self.p,
            q: self.q,
            flag_blocks: self.flag_blocks.clone(),
            degree: self.degree,
            order: self.order,
            samples: self.samples,
            seed: self.seed,
            tolerances: Tolerances {
                algebra: self.tol_algebra,
                eigen: self.tol_eigen,
                morphism: self.tol_morphism,
                dual: self.tol_dual,
                crosscheck: self.tol_crosscheck,
            },
            output: self.out.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flags() {
        let cli = Cli::try_parse_from([
            "ghlab",
            "quotient-verify",
            "--flag-blocks",
            "1,1,2",
            "--samples",
            "20",
            "--group",
            "sp",
        ])
        .unwrap();
        let cfg = cli.to_config();
        assert_eq!(cfg.command, CommandKind::QuotientVerify);
        assert_eq!(cfg.flag_blocks, Some(vec![1, 1, 2]));
        assert_eq!(cfg.samples, 20);
        assert_eq!(cfg.group, GroupKind::Symplectic);
    }

    #[test]
    fn defaults_match_config_defaults() {
        let cli = Cli::try_parse_from(["ghlab", "family-verify", "--seed", "42"]).unwrap();
        assert_eq!(cli.to_config(), RunConfig::default());
    }
}
