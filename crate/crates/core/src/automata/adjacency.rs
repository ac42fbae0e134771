//! Compressed adjacency lists keyed by state, optionally sorted by paren id.

use super::{ParenId, StateId, TransitionId};

#[derive(Debug, Clone, Default)]
pub(crate) struct Csr {
    offsets: Vec<u32>,
    items: Vec<u32>,
    /// Paren id of each item, parallel to `items`; empty when unsorted.
    keys: Vec<u32>,
}

impl Csr {
    /// Groups `entries` of `(state, key, transition)` by state, sorted by key
    /// within each state (stable, so transition order breaks ties).
    pub fn build(num_states: usize, mut entries: Vec<(u32, u32, u32)>, keyed: bool) -> Self {
        entries.sort_by_key(|&(s, k, t)| (s, if keyed { k } else { 0 }, t));
        let mut offsets = vec![0u32; num_states + 1];
        for &(s, _, _) in &entries {
            offsets[s as usize + 1] += 1;
        }
        for i in 0..num_states {
            offsets[i + 1] += offsets[i];
        }
        let keys = if keyed {
            entries.iter().map(|e| e.1).collect()
        } else {
            Vec::new()
        };
        let items = entries.into_iter().map(|e| e.2).collect();
        Csr {
            offsets,
            items,
            keys,
        }
    }

    #[inline]
    pub fn get(&self, state: StateId) -> &[TransitionId] {
        let lo = self.offsets[state as usize] as usize;
        let hi = self.offsets[state as usize + 1] as usize;
        &self.items[lo..hi]
    }

    /// Items of `state` whose paren id is `paren`.
    #[inline]
    pub fn get_keyed(&self, state: StateId, paren: ParenId) -> &[TransitionId] {
        let lo = self.offsets[state as usize] as usize;
        let hi = self.offsets[state as usize + 1] as usize;
        let keys = &self.keys[lo..hi];
        let a = keys.partition_point(|&k| k < paren.0);
        let b = keys.partition_point(|&k| k <= paren.0);
        &self.items[lo + a..lo + b]
    }
}
