//! Rectangular windowing of joint signals along the time axis.

use crate::error::{Error, Result};
use crate::joint::JointSignal;

/// A signal cut into overlapping rectangular windows. Trailing samples that
/// do not fill a whole window are dropped and counted in `clipped_samples`.
#[derive(Debug, Clone)]
pub struct WindowedSequence {
    pub windows: Vec<JointSignal>,
    pub window_length: usize,
    pub step: usize,
    pub clipped_samples: usize,
}

impl WindowedSequence {
    pub fn n_windows(&self) -> usize {
        self.windows.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.windows.first().map_or(0, |w| w.n_vertices())
    }
}

/// Cuts `x` into windows of length `window` whose starts advance by
/// `round(window * (1 - overlap))` samples.
pub fn window_signal(x: &JointSignal, window: usize, overlap: f64) -> Result<WindowedSequence> {
    let t = x.n_time();
    if window == 0 {
        return Err(Error::InvalidParameter("window length must be positive".into()));
    }
    if window > t {
        return Err(Error::WindowTooLarge { window, len: t });
    }
    if !(0.0..1.0).contains(&overlap) {
        return Err(Error::InvalidParameter(format!(
            "overlap fraction must lie in [0, 1), got {overlap}"
        )));
    }
    let step = (window as f64 * (1.0 - overlap)).round() as usize;
    if step == 0 {
        return Err(Error::InvalidParameter(format!(
            "window {window} with overlap {overlap} gives a zero step"
        )));
    }
    let count = (t - window) / step + 1;
    let windows = (0..count)
        .map(|i| {
            let start = i * step;
            JointSignal::new(
                x.values
                    .slice(ndarray::s![.., start..start + window])
                    .to_owned(),
            )
        })
        .collect();
    Ok(WindowedSequence {
        windows,
        window_length: window,
        step,
        clipped_samples: t - ((count - 1) * step + window),
    })
}
