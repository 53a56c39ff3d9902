//! Bundled figure scenarios. Their TOML files live in `configs/` and double
//! as templates for custom runs.

use std::fmt;
use std::str::FromStr;

use super::{Command, Overrides, RunOutput, Scenario};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
    Fig11,
    Fig12,
}

impl Figure {
    pub const ALL: [Figure; 11] = [
        Figure::Fig2,
        Figure::Fig3,
        Figure::Fig4,
        Figure::Fig5,
        Figure::Fig6,
        Figure::Fig7,
        Figure::Fig8,
        Figure::Fig9,
        Figure::Fig10,
        Figure::Fig11,
        Figure::Fig12,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
            Figure::Fig8 => "fig8",
            Figure::Fig9 => "fig9",
            Figure::Fig10 => "fig10",
            Figure::Fig11 => "fig11",
            Figure::Fig12 => "fig12",
        }
    }

    pub fn command(self) -> Command {
        match self {
            Figure::Fig2 | Figure::Fig4 => Command::Analyze,
            Figure::Fig3 | Figure::Fig11 => Command::Simulate,
            Figure::Fig12 => Command::NoCsi,
            _ => Command::Energy,
        }
    }

    /// The bundled scenario file.
    pub fn config_text(self) -> &'static str {
        match self {
            Figure::Fig2 => include_str!("../../configs/fig2.toml"),
            Figure::Fig3 => include_str!("../../configs/fig3.toml"),
            Figure::Fig4 => include_str!("../../configs/fig4.toml"),
            Figure::Fig5 => include_str!("../../configs/fig5.toml"),
            Figure::Fig6 => include_str!("../../configs/fig6.toml"),
            Figure::Fig7 => include_str!("../../configs/fig7.toml"),
            Figure::Fig8 => include_str!("../../configs/fig8.toml"),
            Figure::Fig9 => include_str!("../../configs/fig9.toml"),
            Figure::Fig10 => include_str!("../../configs/fig10.toml"),
            Figure::Fig11 => include_str!("../../configs/fig11.toml"),
            Figure::Fig12 => include_str!("../../configs/fig12.toml"),
        }
    }

    pub fn scenario(self) -> Result<Scenario> {
        Scenario::from_toml_str(self.config_text())
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown figure `{s}`, expected fig2..fig12")))
    }
}

/// Runs a bundled figure scenario; artifacts are named `figN_<table>`.
pub fn reproduce(figure: Figure, overrides: &Overrides) -> Result<RunOutput> {
    let mut scenario = figure.scenario()?;
    scenario.apply(overrides);
    scenario.validate()?;
    Ok(figure.command().run(&scenario)?.prefixed(figure.name()))
}
