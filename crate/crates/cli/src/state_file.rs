//! JSON state files in the three formalisms.

use std::path::Path;

use epitoy::original::SetEpistemicState;
use epitoy::stabilizer::{self, ToyStabilizerGroup};
use epitoy::{EpistemicState, Error, ModVector, Modulus, PhaseSpace};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Formalism {
    #[default]
    General,
    Stabilizer,
    Grid,
}

/// One epistemic state. `general` files use `generators` and `valuation`,
/// `stabilizer` files list signed toy Pauli words, `grid` files list ontic
/// states as label tuples in `1..=4`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub d: u64,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formalism: Option<Formalism>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valuation: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilizers: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ontic: Option<Vec<Vec<u8>>>,
}

/// Why a file does not describe a valid state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StateError {
    /// The file is well formed but the state it describes is not valid.
    Invalid(String),
    Domain(Error),
}

impl From<Error> for StateError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotIsotropic(..) | Error::NotCommuting(..) | Error::ContainsMinusIdentity => {
                StateError::Invalid(e.to_string())
            }
            Error::InvalidState(reason) => StateError::Invalid(reason),
            other => StateError::Domain(other),
        }
    }
}

fn signed(entries: &[u64]) -> Vec<i64> {
    entries.iter().map(|&x| x as i64).collect()
}

impl StateFile {
    pub fn read(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn space(&self) -> Result<PhaseSpace, Error> {
        PhaseSpace::new(self.n, Modulus::new(self.d)?)
    }

    pub fn to_state(&self) -> Result<EpistemicState, StateError> {
        let space = self.space()?;
        match self.formalism.unwrap_or_default() {
            Formalism::General => {
                let d = space.modulus();
                let mut gens = Vec::with_capacity(self.generators.len());
                for g in &self.generators {
                    if g.len() != space.dim() {
                        return Err(Error::DimensionMismatch { expected: space.dim(), found: g.len() }.into());
                    }
                    gens.push(ModVector::from_signed(g, d));
                }
                let v = self.valuation.clone().unwrap_or_else(|| vec![0; space.dim()]);
                if v.len() != space.dim() {
                    return Err(Error::DimensionMismatch { expected: space.dim(), found: v.len() }.into());
                }
                Ok(EpistemicState::new(space, &gens, &ModVector::from_signed(&v, d))?)
            }
            Formalism::Stabilizer => {
                if self.d != 2 {
                    return Err(Error::NotD2(self.d).into());
                }
                let words: Vec<&str> = self.stabilizers.iter().flatten().map(String::as_str).collect();
                let group = if words.is_empty() { ToyStabilizerGroup::trivial(self.n) } else { ToyStabilizerGroup::parse(&words)? };
                if group.n() != self.n {
                    return Err(Error::DimensionMismatch { expected: self.n, found: group.n() }.into());
                }
                Ok(stabilizer::to_general(&group))
            }
            Formalism::Grid => {
                if self.d != 2 {
                    return Err(Error::NotD2(self.d).into());
                }
                let ontic = self.ontic.clone().unwrap_or_default();
                if let Some(bad) = ontic.iter().find(|o| o.len() != self.n) {
                    return Err(Error::DimensionMismatch { expected: self.n, found: bad.len() }.into());
                }
                let set = SetEpistemicState::new(self.n, ontic)?;
                set.to_general().map_err(|reason| StateError::Invalid(reason.message().into()))
            }
        }
    }

    pub fn general(s: &EpistemicState) -> Self {
        StateFile {
            d: s.space().modulus().get(),
            n: s.space().n(),
            formalism: None,
            generators: s.known().basis().iter().map(|b| signed(b)).collect(),
            valuation: Some(signed(s.valuation())),
            stabilizers: None,
            ontic: None,
        }
    }

    pub fn in_formalism(s: &EpistemicState, formalism: Formalism) -> Result<Self, Error> {
        let base = StateFile {
            d: s.space().modulus().get(),
            n: s.space().n(),
            formalism: Some(formalism),
            generators: Vec::new(),
            valuation: None,
            stabilizers: None,
            ontic: None,
        };
        Ok(match formalism {
            Formalism::General => StateFile { formalism: Some(Formalism::General), ..Self::general(s) },
            Formalism::Stabilizer => {
                let group = stabilizer::from_general(s)?;
                StateFile { stabilizers: Some(group.generators().iter().map(|g| g.to_string()).collect()), ..base }
            }
            Formalism::Grid => {
                let set = SetEpistemicState::from_general(s)?;
                StateFile { ontic: Some(set.basis().iter().cloned().collect()), ..base }
            }
        })
    }
}
