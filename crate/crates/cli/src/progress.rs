use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::thread;
use std::time::{Duration, Instant};

const INTERVAL: Duration = Duration::from_secs(2);
const POLL: Duration = Duration::from_millis(50);

/// Runs `work` with a shared counter and, unless `quiet`, reports the counter
/// on stderr every two seconds until `work` returns.
pub fn with_progress<T>(label: &str, total: Option<u128>, quiet: bool, work: impl FnOnce(&AtomicU64) -> T) -> T {
    let counter = AtomicU64::new(0);
    let done = AtomicBool::new(false);
    thread::scope(|s| {
        if !quiet {
            s.spawn(|| {
                let start = Instant::now();
                let mut next = INTERVAL;
                while !done.load(Ordering::Relaxed) {
                    thread::sleep(POLL);
                    let elapsed = start.elapsed();
                    if elapsed >= next && !done.load(Ordering::Relaxed) {
                        next += INTERVAL;
                        let n = counter.load(Ordering::Relaxed);
                        match total {
                            Some(t) if t > 0 => eprintln!(
                                "[{:>6.1}s] {label}: {n}/{t} ({:.1}%)",
                                elapsed.as_secs_f64(),
                                100.0 * n as f64 / t as f64
                            ),
                            _ => eprintln!("[{:>6.1}s] {label}: {n}", elapsed.as_secs_f64()),
                        }
                    }
                }
            });
        }
        let out = work(&counter);
        done.store(true, Ordering::Relaxed);
        out
    })
}
