//! Fixed-stride interned state storage for breadth-first searches.
//!
//! States are stored back to back in one vector and indexed by a hash table of
//! `u32` ids, so a visited set costs the key bytes plus four bytes per state.
//! Ids are handed out in insertion order, which doubles as the BFS queue.

use std::hash::{Hash, Hasher};

use hashbrown::HashTable;
use rustc_hash::FxHasher;

fn hash_key<T: Hash>(key: &[T]) -> u64 {
    let mut h = FxHasher::default();
    key.hash(&mut h);
    h.finish()
}

pub(crate) struct Arena<T> {
    stride: usize,
    count: usize,
    data: Vec<T>,
    index: HashTable<u32>,
}

impl<T: Copy + Eq + Hash> Arena<T> {
    pub fn new(stride: usize) -> Self {
        Arena {
            stride,
            count: 0,
            data: Vec::new(),
            index: HashTable::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn get(&self, id: usize) -> &[T] {
        &self.data[id * self.stride..(id + 1) * self.stride]
    }

    /// Interns `key`; returns its new id, or `None` if it was already present.
    pub fn insert(&mut self, key: &[T]) -> Option<usize> {
        debug_assert_eq!(key.len(), self.stride);
        let hash = hash_key(key);
        let stride = self.stride;
        let Arena { data, index, .. } = self;
        let slot = |id: &u32| {
            let i = *id as usize;
            &data[i * stride..(i + 1) * stride]
        };
        if index.find(hash, |id| slot(id) == key).is_some() {
            return None;
        }
        let id = self.count;
        self.data.extend_from_slice(key);
        self.count += 1;
        let data = &self.data;
        self.index.insert_unique(hash, id as u32, |&i| {
            let i = i as usize;
            hash_key(&data[i * stride..(i + 1) * stride])
        });
        Some(id)
    }
}
