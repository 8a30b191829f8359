//! C ABI over `hoyt_ed`.
//!
//! Every entry point returns a [`HedStatus`] and writes its result through an
//! out-pointer. Handles are opaque and owned by the caller, who releases them
//! with the matching `*_free` function. On failure the message for the calling
//! thread is available from [`hed_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hoyt_ed::{
    DetectorConfig, Error, EvalPolicy, HoytFading, McConfig, Method, MetricValue, SnrModel,
};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HedStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Convergence = 3,
    Overflow = 4,
    InvalidConfig = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HedMethod {
    ClosedInteger = 0,
    ClosedSeries = 1,
    Quadrature = 2,
    MonteCarlo = 3,
}

/// A probability with its provenance.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HedMetric {
    pub value: f64,
    pub est_error: f64,
    pub terms_used: usize,
    pub method: HedMethod,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HedMcEstimate {
    pub value: f64,
    pub std_error: f64,
    pub trials: usize,
}

/// Energy detector with time-bandwidth product u.
pub struct HedDetector(DetectorConfig);

/// Hoyt fading channel.
pub struct HedChannel(HoytFading);

/// Truncation and quadrature controls.
pub struct HedPolicy(EvalPolicy);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> HedStatus {
    match err {
        Error::Domain { .. } => HedStatus::Domain,
        Error::Convergence { .. } => HedStatus::Convergence,
        Error::Overflow { .. } => HedStatus::Overflow,
        Error::InvalidConfig(_) => HedStatus::InvalidConfig,
    }
}

fn null_pointer(what: &str) -> HedStatus {
    set_last_error(format!("null pointer passed for `{what}`"));
    HedStatus::NullPointer
}

/// Runs `f`, translating errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), HedStatus>>(f: F) -> HedStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HedStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal panic: {msg}"));
            HedStatus::Panic
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, HedStatus>;
}

impl<T> OrStatus<T> for hoyt_ed::Result<T> {
    fn or_status(self) -> Result<T, HedStatus> {
        self.map_err(|e| {
            let status = status_of(&e);
            set_last_error(e.to_string());
            status
        })
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, HedStatus> {
    p.as_ref().ok_or_else(|| null_pointer(what))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), HedStatus> {
    if out.is_null() {
        return Err(null_pointer("out"));
    }
    out.write(value);
    Ok(())
}

unsafe fn policy_or_default(p: *const HedPolicy) -> EvalPolicy {
    p.as_ref().map(|p| p.0).unwrap_or_default()
}

fn metric(m: MetricValue) -> HedMetric {
    HedMetric {
        value: m.value,
        est_error: m.est_error,
        terms_used: m.terms_used,
        method: match m.method {
            Method::ClosedInteger => HedMethod::ClosedInteger,
            Method::ClosedSeries => HedMethod::ClosedSeries,
            Method::Quadrature => HedMethod::Quadrature,
            Method::MonteCarlo => HedMethod::MonteCarlo,
        },
    }
}

/// Message for the last failed call on this thread, or NULL after a success.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn hed_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hed_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be a valid pointer to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn hed_detector_new(u: f64, out: *mut *mut HedDetector) -> HedStatus {
    guard(|| {
        let cfg = DetectorConfig::new(u).or_status()?;
        write(out, Box::into_raw(Box::new(HedDetector(cfg))))
    })
}

/// # Safety
/// `det` must be NULL or a handle from `hed_detector_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hed_detector_free(det: *mut HedDetector) {
    if !det.is_null() {
        drop(Box::from_raw(det));
    }
}

/// # Safety
/// `out` must be a valid pointer to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn hed_channel_new(
    q: f64,
    gamma_bar: f64,
    out: *mut *mut HedChannel,
) -> HedStatus {
    guard(|| {
        let f = HoytFading::new(q, gamma_bar).or_status()?;
        write(out, Box::into_raw(Box::new(HedChannel(f))))
    })
}

/// # Safety
/// `chan` must be NULL or a handle from `hed_channel_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hed_channel_free(chan: *mut HedChannel) {
    if !chan.is_null() {
        drop(Box::from_raw(chan));
    }
}

/// # Safety
/// `out` must be a valid pointer to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn hed_policy_new(
    rel_tol: f64,
    max_terms: usize,
    quad_levels: u32,
    out: *mut *mut HedPolicy,
) -> HedStatus {
    guard(|| {
        let p = EvalPolicy::new(rel_tol, max_terms, quad_levels).or_status()?;
        write(out, Box::into_raw(Box::new(HedPolicy(p))))
    })
}

/// # Safety
/// `policy` must be NULL or a handle from `hed_policy_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hed_policy_free(policy: *mut HedPolicy) {
    if !policy.is_null() {
        drop(Box::from_raw(policy));
    }
}

/// False-alarm probability at threshold `lambda`.
///
/// # Safety
/// `det` must be a live detector handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hed_pf(det: *const HedDetector, lambda: f64, out: *mut f64) -> HedStatus {
    guard(|| {
        let det = deref(det, "det")?;
        write(out, hoyt_ed::pf(&det.0, lambda).or_status()?)
    })
}

/// Detection probability at SNR `gamma` (linear) and threshold `lambda`.
///
/// # Safety
/// `det` must be a live detector handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hed_pd(
    det: *const HedDetector,
    gamma: f64,
    lambda: f64,
    out: *mut f64,
) -> HedStatus {
    guard(|| {
        let det = deref(det, "det")?;
        write(out, hoyt_ed::pd(&det.0, gamma, lambda).or_status()?)
    })
}

/// Threshold giving false-alarm probability `pf_target`.
///
/// # Safety
/// `det` must be a live detector handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hed_threshold_for_pf(
    det: *const HedDetector,
    pf_target: f64,
    out: *mut f64,
) -> HedStatus {
    guard(|| {
        let det = deref(det, "det")?;
        write(
            out,
            hoyt_ed::threshold_for_pf(&det.0, pf_target).or_status()?,
        )
    })
}

/// AUC without fading at SNR `gamma` (linear).
///
/// # Safety
/// `det` must be a live detector handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hed_auc_awgn(
    det: *const HedDetector,
    gamma: f64,
    out: *mut HedMetric,
) -> HedStatus {
    guard(|| {
        let det = deref(det, "det")?;
        write(out, metric(hoyt_ed::auc_awgn(&det.0, gamma).or_status()?))
    })
}

/// AUC without fading by direct integration over the threshold.
///
/// # Safety
/// `det` must be a live detector handle, `policy` NULL (defaults) or live, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hed_auc_quadrature(
    det: *const HedDetector,
    gamma: f64,
    policy: *const HedPolicy,
    out: *mut HedMetric,
) -> HedStatus {
    guard(|| {
        let det = deref(det, "det")?;
        let p = policy_or_default(policy);
        write(
            out,
            metric(hoyt_ed::auc_quadrature(&det.0, gamma, &p).or_status()?),
        )
    })
}

/// Fading-averaged AUC from the closed forms.
///
/// # Safety
/// `det` and `chan` must be live handles, `policy` NULL (defaults) or live, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hed_avg_auc(
    det: *const HedDetector,
    chan: *const HedChannel,
    policy: *const HedPolicy,
    out: *mut HedMetric,
) -> HedStatus {
    guard(|| {
        let (det, chan) = (deref(det, "det")?, deref(chan, "chan")?);
        let p = policy_or_default(policy);
        write(
            out,
            metric(hoyt_ed::avg_auc_closed(&det.0, &chan.0, &p).or_status()?),
        )
    })
}

/// Fading-averaged complementary AUC.
///
/// # Safety
/// As for [`hed_avg_auc`].
#[no_mangle]
pub unsafe extern "C" fn hed_avg_cauc(
    det: *const HedDetector,
    chan: *const HedChannel,
    policy: *const HedPolicy,
    out: *mut HedMetric,
) -> HedStatus {
    guard(|| {
        let (det, chan) = (deref(det, "det")?, deref(chan, "chan")?);
        let p = policy_or_default(policy);
        write(
            out,
            metric(hoyt_ed::avg_cauc_closed(&det.0, &chan.0, &p).or_status()?),
        )
    })
}

/// Fading-averaged AUC by integrating the unfaded AUC against the SNR density.
///
/// # Safety
/// As for [`hed_avg_auc`].
#[no_mangle]
pub unsafe extern "C" fn hed_avg_auc_quadrature(
    det: *const HedDetector,
    chan: *const HedChannel,
    policy: *const HedPolicy,
    out: *mut HedMetric,
) -> HedStatus {
    guard(|| {
        let (det, chan) = (deref(det, "det")?, deref(chan, "chan")?);
        let p = policy_or_default(policy);
        write(
            out,
            metric(hoyt_ed::avg_auc_quadrature(&det.0, &chan.0, &p).or_status()?),
        )
    })
}

/// Fading-averaged detection probability at threshold `lambda`.
///
/// # Safety
/// As for [`hed_avg_auc`].
#[no_mangle]
pub unsafe extern "C" fn hed_avg_pd(
    det: *const HedDetector,
    chan: *const HedChannel,
    lambda: f64,
    policy: *const HedPolicy,
    out: *mut HedMetric,
) -> HedStatus {
    guard(|| {
        let (det, chan) = (deref(det, "det")?, deref(chan, "chan")?);
        let p = policy_or_default(policy);
        write(
            out,
            metric(hoyt_ed::avg_pd_quadrature(&det.0, &chan.0, lambda, &p).or_status()?),
        )
    })
}

/// SNR density of the channel at `gamma`.
///
/// # Safety
/// `chan` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hed_snr_pdf(
    chan: *const HedChannel,
    gamma: f64,
    out: *mut f64,
) -> HedStatus {
    guard(|| {
        let chan = deref(chan, "chan")?;
        write(out, chan.0.snr_pdf(gamma).or_status()?)
    })
}

/// SNR distribution function of the channel at `gamma`.
///
/// # Safety
/// `chan` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hed_snr_cdf(
    chan: *const HedChannel,
    gamma: f64,
    out: *mut f64,
) -> HedStatus {
    guard(|| {
        let chan = deref(chan, "chan")?;
        write(out, chan.0.snr_cdf(gamma).or_status()?)
    })
}

/// Moment generating function E[exp(s·γ)].
///
/// # Safety
/// `chan` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hed_snr_mgf(chan: *const HedChannel, s: f64, out: *mut f64) -> HedStatus {
    guard(|| {
        let chan = deref(chan, "chan")?;
        write(out, chan.0.snr_mgf(s).or_status()?)
    })
}

/// Monte-Carlo AUC. With `chan` NULL the SNR is fixed at `gamma`; otherwise a
/// fresh SNR is drawn from the channel for every trial and `gamma` is ignored.
///
/// # Safety
/// `det` must be a live handle, `chan` NULL or live, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hed_estimate_auc(
    det: *const HedDetector,
    chan: *const HedChannel,
    gamma: f64,
    trials: usize,
    seed: u64,
    out: *mut HedMcEstimate,
) -> HedStatus {
    guard(|| {
        let det = deref(det, "det")?;
        let snr = match chan.as_ref() {
            Some(c) => SnrModel::Hoyt(c.0),
            None => SnrModel::Fixed(gamma),
        };
        let est = hoyt_ed::estimate_auc(&det.0, &snr, &McConfig::new(trials, seed)).or_status()?;
        write(
            out,
            HedMcEstimate {
                value: est.value,
                std_error: est.std_error,
                trials: est.trials,
            },
        )
    })
}
