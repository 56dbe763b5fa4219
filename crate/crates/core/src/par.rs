//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the helpers run on the rayon pool unless the
//! process-wide mode is set to [`Exec::Sequential`]. Without the feature they
//! always run sequentially.

use std::sync::atomic::{AtomicBool, Ordering};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

static SEQUENTIAL: AtomicBool = AtomicBool::new(false);

pub fn set_exec(e: Exec) {
    SEQUENTIAL.store(e == Exec::Sequential, Ordering::SeqCst);
}

pub fn exec() -> Exec {
    if cfg!(feature = "parallel") && !SEQUENTIAL.load(Ordering::SeqCst) {
        Exec::Parallel
    } else {
        Exec::Sequential
    }
}

/// Order-preserving map.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec() == Exec::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

pub fn all<T, F>(items: &[T], f: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec() == Exec::Parallel {
        use rayon::prelude::*;
        return items.par_iter().all(f);
    }
    items.iter().all(f)
}

/// Items failing `f`, in input order.
pub fn failures<T, F>(items: &[T], f: F) -> Vec<usize>
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    map(items, |x| f(x))
        .into_iter()
        .enumerate()
        .filter(|(_, ok)| !ok)
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let v: Vec<u64> = (0..1000).collect();
        let a = map(&v, |x| x * x);
        set_exec(Exec::Sequential);
        let b = map(&v, |x| x * x);
        assert_eq!(exec(), Exec::Sequential);
        set_exec(Exec::Parallel);
        assert_eq!(a, b);
        assert_eq!(
            failures(&v, |x| x % 100 != 7),
            vec![7, 107, 207, 307, 407, 507, 607, 707, 807, 907]
        );
    }
}
