//! Data-parallel map with a sequential fallback. The `parallel` feature
//! (default) routes through rayon; without it the same API runs serially.
//! The explicitly sequential twin stays available in both builds so callers
//! can compare the two paths.

#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(usize, &T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().enumerate().map(|(i, x)| f(i, x)).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(usize, &T) -> U + Sync + Send,
{
    map_indexed_seq(items, f)
}

#[cfg(any(test, not(feature = "parallel")))]
pub(crate) fn map_indexed_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(usize, &T) -> U,
{
    items.iter().enumerate().map(|(i, x)| f(i, x)).collect()
}

#[cfg(feature = "parallel")]
pub(crate) fn map_range<U, F>(count: u64, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(u64) -> U + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<U, F>(count: u64, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(u64) -> U + Sync + Send,
{
    map_range_seq(count, f)
}

pub(crate) fn map_range_seq<U, F>(count: u64, f: F) -> Vec<U>
where
    F: Fn(u64) -> U,
{
    (0..count).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let xs: Vec<u64> = (0..257).collect();
        let f = |i: usize, x: &u64| x * 3 + i as u64;
        assert_eq!(map_indexed(&xs, f), map_indexed_seq(&xs, f));
        let g = |i: u64| i * 7 + 1;
        assert_eq!(map_range(257, g), map_range_seq(257, g));
        assert!(map_range(0, g).is_empty());
    }
}
