use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Runs `cell(0..total)` on a worker pool and returns the rows in grid
/// order. Each cell writes only its own slot, so the assembled CSV is
/// independent of scheduling. The bool marks a failed cell.
pub fn parallel_rows<F>(total: usize, threads: usize, cell: F) -> Vec<(String, bool)>
where
    F: Fn(usize) -> (String, bool) + Sync,
{
    let workers = threads.max(1).min(total.max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<(String, bool)>>> = Mutex::new(vec![None; total]);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= total {
                    break;
                }
                let row = cell(i);
                slots.lock().unwrap()[i] = Some(row);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|slot| slot.expect("every cell ran"))
        .collect()
}
