//! Wall-clock timing for reports. The bare wasm32 target has no clock, so there it reads 0.

#[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
pub(crate) struct Stopwatch(std::time::Instant);

#[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
impl Stopwatch {
    pub(crate) fn start() -> Self {
        Stopwatch(std::time::Instant::now())
    }

    pub(crate) fn seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

#[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
pub(crate) struct Stopwatch;

#[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
impl Stopwatch {
    pub(crate) fn start() -> Self {
        Stopwatch
    }

    pub(crate) fn seconds(&self) -> f64 {
        0.0
    }
}
