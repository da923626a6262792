//! Configuration enumeration and the derived semantic notions.
//!
//! Enumeration walks one-event extension steps of the variant's extension
//! order from the empty configuration, memoizing visited sets. Every
//! configuration of a finite structure is reachable this way: any
//! linearization of a configuration's local order passes through
//! configurations only, and each step respects the extension order.

pub mod aes_sem;
pub mod fes_sem;

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::events::EventSet;
use crate::structure::EventStructure;

/// Default cap on the number of events for enumerating operations. The
/// CLI honors `ESFOLD_CAP` to override it.
pub const DEFAULT_CAP: usize = 24;

pub(crate) fn guard_cap(events: usize, cap: usize) -> Result<()> {
    if events > cap {
        Err(Error::Capacity { events, cap })
    } else {
        Ok(())
    }
}

/// The complete configuration family of one structure, sorted by size and
/// then by mask so that enumeration order is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigFamily {
    configs: Vec<EventSet>,
}

impl ConfigFamily {
    pub fn iter(&self) -> impl Iterator<Item = EventSet> + '_ {
        self.configs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn contains(&self, c: EventSet) -> bool {
        self.configs.binary_search_by_key(&(c.len(), c.0), |x| (x.len(), x.0)).is_ok()
    }

    pub fn as_slice(&self) -> &[EventSet] {
        &self.configs
    }

    /// Configurations with no strict superset in the family.
    pub fn maximal(&self) -> Vec<EventSet> {
        self.configs
            .iter()
            .copied()
            .filter(|&c| {
                !self
                    .configs
                    .iter()
                    .any(|&d| d != c && c.is_subset(d))
            })
            .collect()
    }

    /// Those members containing the given event.
    pub fn containing(&self, e: usize) -> Vec<EventSet> {
        self.configs.iter().copied().filter(|c| c.contains(e)).collect()
    }
}

/// Enumerates every configuration of `s`, including the empty one.
pub fn configurations(s: &EventStructure, cap: usize) -> Result<ConfigFamily> {
    guard_cap(s.events().len(), cap)?;
    let mut seen: HashSet<u64> = HashSet::new();
    seen.insert(0);
    let mut stack = vec![EventSet::EMPTY];
    while let Some(c) = stack.pop() {
        for e in s.extension_events(c).iter() {
            let next = c.with(e);
            if seen.insert(next.0) {
                stack.push(next);
            }
        }
    }
    let mut configs: Vec<EventSet> = seen.into_iter().map(EventSet).collect();
    configs.sort_by_key(|c| (c.len(), c.0));
    Ok(ConfigFamily { configs })
}

/// Whether `c2` extends `c1` in the variant's extension order. Both sets
/// are expected to be configurations of `s`.
pub fn extends(s: &EventStructure, c1: EventSet, c2: EventSet) -> bool {
    s.extends_to(c1, c2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pes::Pes;

    #[test]
    fn empty_structure_has_only_the_empty_configuration() {
        let p = Pes::build_named(&[], &[], &[]).unwrap();
        let fam = configurations(&p.into(), DEFAULT_CAP).unwrap();
        assert_eq!(fam.len(), 1);
        assert!(fam.contains(EventSet::EMPTY));
    }

    #[test]
    fn capacity_guard_trips() {
        let p = Pes::build_named(&[("a", "a"), ("b", "b")], &[], &[]).unwrap();
        let err = configurations(&p.into(), 1).unwrap_err();
        assert!(matches!(err, Error::Capacity { events: 2, cap: 1 }));
    }

    #[test]
    fn extends_is_reflexive_on_configs() {
        let p = Pes::build_named(&[("a", "a"), ("b", "b")], &[("a", "b")], &[]).unwrap();
        let s: EventStructure = p.into();
        let fam = configurations(&s, DEFAULT_CAP).unwrap();
        for c in fam.iter() {
            assert!(extends(&s, c, c));
        }
    }
}
