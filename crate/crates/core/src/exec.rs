//! Per-client fan-out with a rayon backend and a sequential fallback.
//!
//! Results always come back in input order, so callers that reduce over
//! them get identical floating-point results in either mode.

/// How per-client work inside a round is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when the `parallel` feature is disabled.
    #[default]
    Parallel,
}

impl Execution {
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Fallible variant; the first error in input order wins.
    pub fn try_map<T, R, E, F>(self, items: &[T], f: F) -> Result<Vec<R>, E>
    where
        T: Sync,
        R: Send,
        E: Send,
        F: Fn(&T) -> Result<R, E> + Sync + Send,
    {
        self.map(items, f).into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_and_preserve_order() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = Execution::Sequential.map(&xs, |x| x * x);
        let b = Execution::Parallel.map(&xs, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(a[999], 998001);
    }

    #[test]
    fn try_map_reports_first_error() {
        let xs: Vec<i32> = vec![1, -2, 3, -4];
        let r: Result<Vec<i32>, i32> =
            Execution::Parallel.try_map(&xs, |&x| if x < 0 { Err(x) } else { Ok(x) });
        assert_eq!(r, Err(-2));
    }
}
