//! Session files and the `wn` command line front end.

pub mod run;
pub mod session;

pub use run::{run_session, run_source, Report, RunOptions, SessionError, Status};
pub use session::{parse_session, ParseError, Session};

/// Runs `f` on a dedicated pool with `threads` workers, or on the global
/// pool when `threads` is `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().expect("thread pool").install(f),
        None => f(),
    }
}

/// Worker count requested through `WN_THREADS`.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("WN_THREADS").ok().and_then(|v| v.trim().parse().ok())
}
