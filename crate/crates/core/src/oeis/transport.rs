use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Fetches a URL as text. Non-success statuses are transport errors.
pub trait Transport: Send + Sync {
    fn get(&self, url: &str) -> Result<String>;
}

pub struct HttpTransport {
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new(timeout: Duration) -> Self {
        let config = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .user_agent(concat!("seqfam/", env!("CARGO_PKG_VERSION")))
            .build();
        HttpTransport {
            agent: ureq::Agent::new_with_config(config),
        }
    }
}

impl Default for HttpTransport {
    fn default() -> Self {
        HttpTransport::new(Duration::from_secs(30))
    }
}

impl Transport for HttpTransport {
    fn get(&self, url: &str) -> Result<String> {
        let mut resp = self
            .agent
            .get(url)
            .call()
            .map_err(|e| Error::Transport(format!("GET {url}: {e}")))?;
        resp.body_mut()
            .read_to_string()
            .map_err(|e| Error::Transport(format!("reading {url}: {e}")))
    }
}

/// One gate for the whole process: requests are serialized and spaced.
static GATE: Mutex<Option<Instant>> = Mutex::new(None);

fn gated<T>(min_interval: Duration, f: impl FnOnce() -> T) -> T {
    let mut last = GATE.lock().unwrap_or_else(|p| p.into_inner());
    if let Some(t) = *last {
        let wait = min_interval.saturating_sub(t.elapsed());
        if !wait.is_zero() {
            thread::sleep(wait);
        }
    }
    let out = f();
    *last = Some(Instant::now());
    out
}

#[derive(Debug, Clone, Copy)]
pub struct RetryPolicy {
    pub min_interval: Duration,
    /// Extra attempts after the first failure.
    pub retries: u32,
    /// Delay before the first retry; doubled on each further one.
    pub backoff: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            min_interval: Duration::from_secs(1),
            retries: 3,
            backoff: Duration::from_secs(2),
        }
    }
}

pub(crate) fn fetch(transport: &dyn Transport, policy: &RetryPolicy, url: &str) -> Result<String> {
    let mut attempt = 0;
    loop {
        match gated(policy.min_interval, || transport.get(url)) {
            Err(Error::Transport(_)) if attempt < policy.retries => {
                thread::sleep(policy.backoff * 2u32.saturating_pow(attempt));
                attempt += 1;
            }
            other => return other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicU32, Ordering};

    struct Flaky {
        fail_first: u32,
        calls: AtomicU32,
    }

    impl Transport for Flaky {
        fn get(&self, _url: &str) -> Result<String> {
            let k = self.calls.fetch_add(1, Ordering::SeqCst);
            if k < self.fail_first {
                Err(Error::Transport("down".into()))
            } else {
                Ok("ok".into())
            }
        }
    }

    fn quick(retries: u32) -> RetryPolicy {
        RetryPolicy {
            min_interval: Duration::ZERO,
            retries,
            backoff: Duration::from_millis(1),
        }
    }

    #[test]
    fn retries_then_succeeds() {
        let t = Flaky { fail_first: 2, calls: AtomicU32::new(0) };
        assert_eq!(fetch(&t, &quick(3), "x").unwrap(), "ok");
        assert_eq!(t.calls.load(Ordering::SeqCst), 3);
    }

    #[test]
    fn gives_up_with_transport_error() {
        let t = Flaky { fail_first: 10, calls: AtomicU32::new(0) };
        assert!(matches!(fetch(&t, &quick(2), "x"), Err(Error::Transport(_))));
        assert_eq!(t.calls.load(Ordering::SeqCst), 3);
    }

    #[test]
    fn gate_spaces_requests() {
        let t = Flaky { fail_first: 0, calls: AtomicU32::new(0) };
        let policy = RetryPolicy { min_interval: Duration::from_millis(60), ..quick(0) };
        let start = Instant::now();
        for _ in 0..3 {
            fetch(&t, &policy, "x").unwrap();
        }
        assert!(start.elapsed() >= Duration::from_millis(120));
    }
}
