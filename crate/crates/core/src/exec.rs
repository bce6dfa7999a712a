//! Sequential or data-parallel execution of independent work items.
//!
//! Results always come back in input order, so parallel runs are
//! deterministic.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// `Parallel` only when the crate was built with the `parallel` feature.
    pub fn effective(self) -> Exec {
        if cfg!(feature = "parallel") {
            self
        } else {
            Exec::Sequential
        }
    }

    pub fn map<T, U, F>(self, items: Vec<T>, f: F) -> Vec<U>
    where
        T: Send,
        U: Send,
        F: Fn(T) -> U + Sync + Send,
    {
        match self.effective() {
            Exec::Sequential => items.into_iter().map(f).collect(),
            Exec::Parallel => par_map(items, f),
        }
    }

    /// Index of the first item (in input order) satisfying `pred`.
    pub fn find_first<T, F>(self, items: &[T], pred: F) -> Option<usize>
    where
        T: Sync,
        F: Fn(&T) -> bool + Sync + Send,
    {
        match self.effective() {
            Exec::Sequential => items.iter().position(pred),
            Exec::Parallel => par_find_first(items, pred),
        }
    }
}

#[cfg(feature = "parallel")]
fn par_map<T: Send, U: Send, F: Fn(T) -> U + Sync + Send>(items: Vec<T>, f: F) -> Vec<U> {
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T: Send, U: Send, F: Fn(T) -> U + Sync + Send>(items: Vec<T>, f: F) -> Vec<U> {
    items.into_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
fn par_find_first<T: Sync, F: Fn(&T) -> bool + Sync + Send>(items: &[T], pred: F) -> Option<usize> {
    use rayon::prelude::*;
    items.par_iter().position_first(pred)
}

#[cfg(not(feature = "parallel"))]
fn par_find_first<T: Sync, F: Fn(&T) -> bool + Sync + Send>(items: &[T], pred: F) -> Option<usize> {
    items.iter().position(pred)
}
