use std::sync::atomic::{AtomicBool, Ordering};
use std::thread;

/// Maps `0` to the number of available hardware threads.
pub fn resolve_workers(requested: usize) -> usize {
    if requested > 0 {
        requested
    } else {
        thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    }
}

/// Applies `f` to every index in `0..count` on up to `workers` threads.
///
/// Indices are split into contiguous blocks, one per worker. Results come
/// back in index order. On failure, remaining work is abandoned and the
/// error with the lowest index observed is returned with that index.
pub(crate) fn map_indices<R, E, F>(count: usize, workers: usize, f: F) -> Result<Vec<R>, (usize, E)>
where
    R: Send,
    E: Send,
    F: Fn(usize) -> Result<R, E> + Sync,
{
    let workers = resolve_workers(workers).min(count).max(1);
    if workers == 1 {
        return (0..count).map(|i| f(i).map_err(|e| (i, e))).collect();
    }
    let block = count.div_ceil(workers);
    let abort = AtomicBool::new(false);
    let outcomes: Vec<Result<Vec<R>, (usize, E)>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let lo = w * block;
                let hi = ((w + 1) * block).min(count);
                let f = &f;
                let abort = &abort;
                scope.spawn(move || {
                    let mut out = Vec::with_capacity(hi.saturating_sub(lo));
                    for i in lo..hi {
                        if abort.load(Ordering::Relaxed) {
                            break;
                        }
                        match f(i) {
                            Ok(r) => out.push(r),
                            Err(e) => {
                                abort.store(true, Ordering::Relaxed);
                                return Err((i, e));
                            }
                        }
                    }
                    Ok(out)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker thread panicked"))
            .collect()
    });

    let mut results = Vec::with_capacity(count);
    let mut first_err: Option<(usize, E)> = None;
    for o in outcomes {
        match o {
            Ok(v) => results.extend(v),
            Err((i, e)) => {
                if first_err.as_ref().is_none_or(|(j, _)| i < *j) {
                    first_err = Some((i, e));
                }
            }
        }
    }
    match first_err {
        Some(err) => Err(err),
        None => Ok(results),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order_for_any_worker_count() {
        for workers in [1, 2, 3, 4, 7, 64] {
            let got: Vec<usize> = map_indices(23, workers, |i| Ok::<_, ()>(i * i)).unwrap();
            assert_eq!(got, (0..23).map(|i| i * i).collect::<Vec<_>>());
        }
    }

    #[test]
    fn reports_failing_index() {
        let r: Result<Vec<usize>, _> = map_indices(10, 1, |i| if i == 6 { Err("bad") } else { Ok(i) });
        assert_eq!(r, Err((6, "bad")));
        let r: Result<Vec<usize>, _> = map_indices(10, 3, |i| if i == 6 { Err("bad") } else { Ok(i) });
        assert_eq!(r, Err((6, "bad")));
    }

    #[test]
    fn empty_input() {
        let r: Vec<u8> = map_indices(0, 4, |_| Ok::<_, ()>(1)).unwrap();
        assert!(r.is_empty());
    }
}
