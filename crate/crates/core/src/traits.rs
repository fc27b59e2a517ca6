//! The five personality factors and a fixed-size per-factor container.

use core::fmt;
use core::ops::{Index, IndexMut};
use core::str::FromStr;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

/// One of the Big-Five factors, in the canonical O, C, E, A, N order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trait {
    /// Intellectual curiosity, imagination and preference for novelty.
    Openness,
    /// Self-discipline, organization and dutifulness.
    Conscientiousness,
    /// Sociability and seeking stimulation in the company of others.
    Extraversion,
    /// Compassion and cooperation toward others.
    Agreeableness,
    /// Tendency to experience negative emotions easily.
    Neuroticism,
}

impl Trait {
    pub const ALL: [Trait; 5] = [
        Trait::Openness,
        Trait::Conscientiousness,
        Trait::Extraversion,
        Trait::Agreeableness,
        Trait::Neuroticism,
    ];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn name(self) -> &'static str {
        match self {
            Trait::Openness => "openness",
            Trait::Conscientiousness => "conscientiousness",
            Trait::Extraversion => "extraversion",
            Trait::Agreeableness => "agreeableness",
            Trait::Neuroticism => "neuroticism",
        }
    }
}

impl fmt::Display for Trait {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown trait name: {0:?}")]
pub struct ParseTraitError(pub alloc::string::String);

impl FromStr for Trait {
    type Err = ParseTraitError;

    /// Accepts the full factor name in any letter case.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Trait::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ParseTraitError(s.into()))
    }
}

/// A value for each of the five traits, indexed by [`Trait`].
///
/// Serializes as a map keyed by trait name in O, C, E, A, N order.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PerTrait<T>(pub [T; 5]);

impl<T> PerTrait<T> {
    pub fn from_fn(mut f: impl FnMut(Trait) -> T) -> Self {
        PerTrait(Trait::ALL.map(&mut f))
    }

    pub fn map<U>(self, f: impl FnMut(T) -> U) -> PerTrait<U> {
        PerTrait(self.0.map(f))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Trait, &T)> {
        Trait::ALL.into_iter().zip(self.0.iter())
    }
}

impl<T> Index<Trait> for PerTrait<T> {
    type Output = T;

    fn index(&self, t: Trait) -> &T {
        &self.0[t.index()]
    }
}

impl<T> IndexMut<Trait> for PerTrait<T> {
    fn index_mut(&mut self, t: Trait) -> &mut T {
        &mut self.0[t.index()]
    }
}

impl<T: Serialize> Serialize for PerTrait<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(5))?;
        for (t, v) in self.iter() {
            map.serialize_entry(t.name(), v)?;
        }
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_is_case_insensitive() {
        assert_eq!("Agreeableness".parse::<Trait>(), Ok(Trait::Agreeableness));
        assert_eq!("NEUROTICISM".parse::<Trait>(), Ok(Trait::Neuroticism));
        assert!("agreeable".parse::<Trait>().is_err());
    }

    #[test]
    fn order_is_ocean() {
        let names: Vec<_> = Trait::ALL.iter().map(|t| t.name()).collect();
        assert_eq!(
            names,
            ["openness", "conscientiousness", "extraversion", "agreeableness", "neuroticism"]
        );
        for (i, t) in Trait::ALL.iter().enumerate() {
            assert_eq!(t.index(), i);
        }
    }
}
