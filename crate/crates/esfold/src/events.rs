//! Event tables, event sets and binary relations.
//!
//! Structures are dense: events are indexed `0..n` and relations are bit
//! matrices. Public surfaces speak in event names (strings); everything
//! internal works on indices. The representation caps out at
//! [`MAX_EVENTS`] events, which is far above the enumeration cap used by
//! the semantic operations.

use std::fmt;

use crate::error::{Error, Result};

/// Hard representation limit (bit-set width).
pub const MAX_EVENTS: usize = 64;

/// A set of event indices, backed by a 64-bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct EventSet(pub u64);

impl EventSet {
    pub const EMPTY: EventSet = EventSet(0);

    pub fn singleton(i: usize) -> Self {
        EventSet(1u64 << i)
    }

    pub fn full(n: usize) -> Self {
        if n == 0 {
            EventSet(0)
        } else if n >= 64 {
            EventSet(u64::MAX)
        } else {
            EventSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1u64 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    pub fn with(self, i: usize) -> Self {
        EventSet(self.0 | (1u64 << i))
    }

    pub fn without(self, i: usize) -> Self {
        EventSet(self.0 & !(1u64 << i))
    }

    pub fn union(self, other: Self) -> Self {
        EventSet(self.0 | other.0)
    }

    pub fn intersect(self, other: Self) -> Self {
        EventSet(self.0 & other.0)
    }

    pub fn minus(self, other: Self) -> Self {
        EventSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Iterates indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// All subsets of this set, in ascending mask order (∅ first, the set
    /// itself last).
    pub fn subsets(self) -> impl Iterator<Item = EventSet> {
        let mask = self.0;
        let mut next: Option<u64> = Some(0);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask {
                None
            } else {
                Some((cur.wrapping_sub(mask)) & mask)
            };
            Some(EventSet(cur))
        })
    }
}

impl FromIterator<usize> for EventSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = EventSet(0);
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Display for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// A binary relation on `0..n`, stored as one successor mask per element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    rows: Vec<u64>,
}

impl Relation {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_EVENTS);
        Relation { n, rows: vec![0; n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Relation::new(n);
        for i in 0..n {
            r.insert(i, i);
        }
        r
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut r = Relation::new(n);
        for &(a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.rows[a] & (1u64 << b) != 0
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        debug_assert!(a < self.n && b < self.n);
        self.rows[a] |= 1u64 << b;
    }

    pub fn remove(&mut self, a: usize, b: usize) {
        self.rows[a] &= !(1u64 << b);
    }

    /// Successors of `a`: all `b` with `(a, b)` in the relation.
    pub fn row(&self, a: usize) -> EventSet {
        EventSet(self.rows[a])
    }

    /// Predecessors of `b`: all `a` with `(a, b)` in the relation.
    pub fn column(&self, b: usize) -> EventSet {
        let mut s = EventSet::EMPTY;
        for a in 0..self.n {
            if self.contains(a, b) {
                s.insert(a);
            }
        }
        s
    }

    pub fn pair_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    /// All pairs in row-major order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in self.row(a).iter() {
                out.push((a, b));
            }
        }
        out
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.n).all(|i| !self.contains(i, i))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|i| self.contains(i, i))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.contains(a, b) == self.contains(b, a)))
    }

    pub fn symmetrize(&mut self) {
        for a in 0..self.n {
            for b in self.row(a).iter().collect::<Vec<_>>() {
                self.insert(b, a);
            }
        }
    }

    pub fn reflexive_close(&mut self) {
        for i in 0..self.n {
            self.insert(i, i);
        }
    }

    /// Warshall closure.
    pub fn transitive_close(&mut self) {
        for k in 0..self.n {
            for a in 0..self.n {
                if self.contains(a, k) {
                    self.rows[a] |= self.rows[k];
                }
            }
        }
    }

    pub fn transitive_closure(&self) -> Relation {
        let mut r = self.clone();
        r.transitive_close();
        r
    }

    /// Reflexive-transitive closure restricted to `set`, as a relation on
    /// the full index range (pairs outside `set` absent).
    pub fn star_within(&self, set: EventSet) -> Relation {
        let mut r = Relation::new(self.n);
        for a in set.iter() {
            r.insert(a, a);
            for b in self.row(a).intersect(set).iter() {
                r.insert(a, b);
            }
        }
        for k in set.iter() {
            for a in set.iter() {
                if r.contains(a, k) {
                    r.rows[a] |= r.rows[k];
                }
            }
        }
        r
    }

    /// True if the relation restricted to `set` has no cycle (self-loops
    /// count as cycles).
    pub fn is_acyclic_on(&self, set: EventSet) -> bool {
        // Kahn-style peeling on the induced subgraph.
        let mut remaining = set;
        loop {
            if remaining.is_empty() {
                return true;
            }
            let mut peeled = false;
            for b in remaining.iter() {
                let preds = self.column(b).intersect(remaining).without(b);
                let has_self = self.contains(b, b);
                if preds.is_empty() && !has_self {
                    remaining.remove(b);
                    peeled = true;
                }
            }
            if !peeled {
                return false;
            }
        }
    }

    /// True if the subgraph induced by `set` is strongly connected and
    /// every element lies on some cycle (for a singleton this demands a
    /// self-loop).
    pub fn is_cyclically_connected_on(&self, set: EventSet) -> bool {
        if set.is_empty() {
            return false;
        }
        if set.len() == 1 {
            let i = set.iter().next().unwrap();
            return self.contains(i, i);
        }
        let start = set.iter().next().unwrap();
        let reach = |forward: bool| -> EventSet {
            let mut seen = EventSet::singleton(start);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                let nexts = if forward {
                    self.row(v).intersect(set)
                } else {
                    self.column(v).intersect(set)
                };
                for w in nexts.iter() {
                    if !seen.contains(w) {
                        seen.insert(w);
                        stack.push(w);
                    }
                }
            }
            seen
        };
        reach(true) == set && reach(false) == set
    }

    /// Keeps only pairs with both endpoints in `keep`.
    pub fn restricted_to(&self, keep: EventSet) -> Relation {
        let mut r = Relation::new(self.n);
        for a in keep.iter() {
            r.rows[a] = self.row(a).intersect(keep).0;
        }
        r
    }

    /// Transitive reduction of a strict order (caller guarantees the input
    /// is transitive and acyclic).
    pub fn transitive_reduction(&self) -> Relation {
        let mut r = self.clone();
        for a in 0..self.n {
            for b in self.row(a).iter() {
                if a == b {
                    continue;
                }
                for z in self.row(a).iter() {
                    if z != a && z != b && self.contains(z, b) {
                        r.remove(a, b);
                        break;
                    }
                }
            }
        }
        r
    }
}

/// Shared event table: names and labels, indexed densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Events {
    names: Vec<String>,
    labels: Vec<String>,
}

impl Events {
    pub fn new(pairs: &[(&str, &str)]) -> Result<Self> {
        Events::from_owned(
            pairs
                .iter()
                .map(|(n, l)| (n.to_string(), l.to_string()))
                .collect(),
        )
    }

    pub fn from_owned(pairs: Vec<(String, String)>) -> Result<Self> {
        if pairs.len() > MAX_EVENTS {
            return Err(Error::TooManyEvents {
                events: pairs.len(),
                max: MAX_EVENTS,
            });
        }
        let mut names = Vec::with_capacity(pairs.len());
        let mut labels = Vec::with_capacity(pairs.len());
        for (name, label) in pairs {
            if name.is_empty() {
                return Err(Error::EmptyName);
            }
            if label.is_empty() {
                return Err(Error::EmptyLabel { event: name });
            }
            if names.contains(&name) {
                return Err(Error::DuplicateEvent { event: name });
            }
            names.push(name);
            labels.push(label);
        }
        Ok(Events { names, labels })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn all(&self) -> EventSet {
        EventSet::full(self.len())
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> {
        0..self.len()
    }

    /// Renders a set as sorted event names.
    pub fn set_names(&self, set: EventSet) -> Vec<String> {
        let mut v: Vec<String> = set.iter().map(|i| self.names[i].clone()).collect();
        v.sort();
        v
    }

    /// Resolves a list of names, failing on the first unknown one.
    pub fn resolve(&self, names: &[&str]) -> Result<EventSet> {
        let mut s = EventSet::EMPTY;
        for n in names {
            match self.index_of(n) {
                Some(i) => s.insert(i),
                None => {
                    return Err(Error::UnknownEvent {
                        event: n.to_string(),
                    })
                }
            }
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_ops() {
        let s = EventSet::from_iter([0, 2, 5]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(2));
        assert!(!s.contains(1));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 2, 5]);
        assert_eq!(s.subsets().count(), 8);
        assert!(EventSet::from_iter([0, 5]).is_subset(s));
    }

    #[test]
    fn closure_and_reduction() {
        let mut r = Relation::from_pairs(3, &[(0, 1), (1, 2)]);
        r.transitive_close();
        assert!(r.contains(0, 2));
        let red = r.transitive_reduction();
        assert!(red.contains(0, 1) && red.contains(1, 2) && !red.contains(0, 2));
    }

    #[test]
    fn acyclicity() {
        let r = Relation::from_pairs(3, &[(0, 1), (1, 2)]);
        assert!(r.is_acyclic_on(EventSet::full(3)));
        let c = Relation::from_pairs(3, &[(0, 1), (1, 0)]);
        assert!(!c.is_acyclic_on(EventSet::full(3)));
        assert!(c.is_acyclic_on(EventSet::singleton(0)));
        assert!(c.is_cyclically_connected_on(EventSet::from_iter([0, 1])));
        assert!(!c.is_cyclically_connected_on(EventSet::full(3)));
    }

    #[test]
    fn duplicate_events_rejected() {
        let err = Events::new(&[("a", "x"), ("a", "y")]).unwrap_err();
        assert!(matches!(err, Error::DuplicateEvent { .. }));
    }
}
