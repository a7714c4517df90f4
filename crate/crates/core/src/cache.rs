use std::collections::HashMap;
use std::hash::Hash;
use std::sync::RwLock;

/// A thread-safe memo table that clones its contents on `Clone`.
#[derive(Debug, Default)]
pub struct Memo<K, V>(RwLock<HashMap<K, V>>);

impl<K: Eq + Hash + Clone, V: Clone> Memo<K, V> {
    pub fn new() -> Self {
        Memo(RwLock::new(HashMap::new()))
    }

    pub fn get(&self, k: &K) -> Option<V> {
        self.0.read().expect("memo lock").get(k).cloned()
    }

    pub fn insert(&self, k: K, v: V) {
        self.0.write().expect("memo lock").insert(k, v);
    }

    pub fn get_or_try<E>(&self, k: &K, f: impl FnOnce() -> Result<V, E>) -> Result<V, E> {
        if let Some(v) = self.get(k) {
            return Ok(v);
        }
        let v = f()?;
        self.insert(k.clone(), v.clone());
        Ok(v)
    }
}

impl<K: Clone, V: Clone> Clone for Memo<K, V> {
    fn clone(&self) -> Self {
        Memo(RwLock::new(self.0.read().expect("memo lock").clone()))
    }
}
