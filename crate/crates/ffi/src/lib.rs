//! C ABI over `argzeta`.
//!
//! Objects cross the boundary as opaque pointers created by `az_*_new` or
//! `az_*_load` and released by the matching `az_*_free`. Fallible calls return
//! an [`AzStatus`] and write results through out-pointers; on failure a
//! message is kept per thread and can be read with [`az_last_error_message`].
//! Panics are caught at the boundary and reported as `AZ_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use argzeta::bounds::{s1_envelope, s_envelope, Height};
use argzeta::explicit::{balance, BalanceOptions, BalanceReport, TestFunction};
use argzeta::extremal::{l1_gap_closed_form, ExtremalSeries, Side, Truncation};
use argzeta::oracle::Oracle;
use argzeta::sieve::VonMangoldt;
use argzeta::special::{f1, f_odd, Parity};
use argzeta::zeros::ZeroTable;
use argzeta::Error;

pub const AZ_PARITY_EVEN: u32 = 0;
pub const AZ_PARITY_ODD: u32 = 1;
pub const AZ_SIDE_MINORANT: u32 = 0;
pub const AZ_SIDE_MAJORANT: u32 = 1;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AzStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Coverage = 4,
    Data = 5,
    Numerical = 6,
    Infeasible = 7,
    Io = 8,
    Panic = 9,
}

impl From<&Error> for AzStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain { .. } => AzStatus::Domain,
            Error::Range(_) | Error::Parameter(_) => AzStatus::InvalidArgument,
            Error::Truncation { .. } | Error::Quadrature { .. } | Error::TailModel(_) => AzStatus::Numerical,
            Error::Coverage { .. } => AzStatus::Coverage,
            Error::Parse { .. }
            | Error::Monotonicity { .. }
            | Error::Validation(_)
            | Error::EmptyTable
            | Error::Cache(_)
            | Error::NoZeroTable => AzStatus::Data,
            Error::Infeasible { .. } => AzStatus::Infeasible,
            Error::Io { .. } => AzStatus::Io,
        }
    }
}

/// A validated table of zeta zero ordinates.
pub struct AzZeroTable(ZeroTable);

/// A truncated extremal series for one kernel, side and width.
pub struct AzExtremal(Arc<ExtremalSeries>);

/// Sieved values of the von Mangoldt function.
pub struct AzVonMangoldt(VonMangoldt);

/// Both sides of the explicit formula for one test function.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AzBalance {
    pub zero_side: f64,
    pub pole_terms: f64,
    pub log_pi_term: f64,
    pub archimedean: f64,
    pub prime_side: f64,
    pub residual: f64,
    pub truncation_budget: f64,
    pub zeros_used: usize,
    pub prime_cutoff: u64,
    pub within_budget: bool,
}

impl From<BalanceReport> for AzBalance {
    fn from(r: BalanceReport) -> Self {
        AzBalance {
            zero_side: r.zero_side,
            pole_terms: r.pole_terms,
            log_pi_term: r.log_pi_term,
            archimedean: r.archimedean,
            prime_side: r.prime_side,
            residual: r.residual,
            truncation_budget: r.truncation_budget,
            zeros_used: r.zeros_used,
            prime_cutoff: r.prime_cutoff,
            within_budget: r.within_budget(),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

enum Fail {
    Status(AzStatus, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(AzStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail::Status(AzStatus::InvalidArgument, msg.into())
}

/// Runs `f` behind the panic barrier and converts its outcome to a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> AzStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AzStatus::Ok,
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Fail::Lib(e))) => {
            let s = AzStatus::from(&e);
            set_error(e.to_string());
            s
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            AzStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

fn parity(p: u32) -> Result<Parity, Fail> {
    match p {
        AZ_PARITY_EVEN => Ok(Parity::Even),
        AZ_PARITY_ODD => Ok(Parity::Odd),
        _ => Err(invalid(format!("unknown parity {p}"))),
    }
}

fn side(s: u32) -> Result<Side, Fail> {
    match s {
        AZ_SIDE_MINORANT => Ok(Side::Minorant),
        AZ_SIDE_MAJORANT => Ok(Side::Majorant),
        _ => Err(invalid(format!("unknown side {s}"))),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn az_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL if it succeeded.
///
/// The pointer stays valid until the next `az_*` call on the same thread.
#[no_mangle]
pub extern "C" fn az_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// `1 - x arctan(1/x)`.
#[no_mangle]
pub extern "C" fn az_f1(x: f64) -> f64 {
    f1(x)
}

/// `arctan(1/x) - x/(1+x^2)`, with value 0 at `x = 0`.
#[no_mangle]
pub extern "C" fn az_f_odd(x: f64) -> f64 {
    f_odd(x)
}

/// Closed-form `L^1` distance between an extremal function and its kernel.
///
/// # Safety
/// `gap` must be null or point to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn az_l1_gap(parity_code: u32, side_code: u32, delta: f64, gap: *mut f64) -> AzStatus {
    guard(|| {
        let gap = out(gap, "gap")?;
        *gap = l1_gap_closed_form(parity(parity_code)?, side(side_code)?, delta)?;
        Ok(())
    })
}

/// Loads a zero table from a text file or binary cache.
///
/// # Safety
/// `path` must be a NUL-terminated string and `table` a writable pointer slot.
/// On success `*table` owns a handle to release with [`az_zero_table_free`].
#[no_mangle]
pub unsafe extern "C" fn az_zero_table_load(path: *const c_char, table: *mut *mut AzZeroTable) -> AzStatus {
    guard(|| {
        let slot = out(table, "table")?;
        *slot = ptr::null_mut();
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| invalid("path is not UTF-8"))?;
        let z = ZeroTable::load(path)?;
        *slot = Box::into_raw(Box::new(AzZeroTable(z)));
        Ok(())
    })
}

/// Builds a table from `len` increasing ordinates.
///
/// # Safety
/// `ordinates` must point to `len` readable doubles; `table` as for
/// [`az_zero_table_load`].
#[no_mangle]
pub unsafe extern "C" fn az_zero_table_from_ordinates(
    ordinates: *const f64,
    len: usize,
    height_max: f64,
    table: *mut *mut AzZeroTable,
) -> AzStatus {
    guard(|| {
        let slot = out(table, "table")?;
        *slot = ptr::null_mut();
        if ordinates.is_null() {
            return Err(null("ordinates"));
        }
        let v = std::slice::from_raw_parts(ordinates, len).to_vec();
        let hmax = if height_max.is_nan() { None } else { Some(height_max) };
        let z = ZeroTable::new(v, hmax, "memory")?;
        *slot = Box::into_raw(Box::new(AzZeroTable(z)));
        Ok(())
    })
}

/// # Safety
/// `table` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn az_zero_table_free(table: *mut AzZeroTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Number of ordinates; 0 for a null handle.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn az_zero_table_len(table: *const AzZeroTable) -> usize {
    table.as_ref().map_or(0, |t| t.0.len())
}

/// Height up to which the table is complete; NaN for a null handle.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn az_zero_table_height_max(table: *const AzZeroTable) -> f64 {
    table.as_ref().map_or(f64::NAN, |t| t.0.height_max())
}

/// `S(t)` from zero counting.
///
/// # Safety
/// `table` must be a live handle and `s` writable.
#[no_mangle]
pub unsafe extern "C" fn az_oracle_s(table: *const AzZeroTable, t: f64, s: *mut f64) -> AzStatus {
    guard(|| {
        let z = get(table, "table")?;
        *out(s, "s")? = Oracle::new(&z.0).s(t)?.s;
        Ok(())
    })
}

/// `S_1(t) = int_0^t S`.
///
/// # Safety
/// `table` must be a live handle and `s1` writable.
#[no_mangle]
pub unsafe extern "C" fn az_oracle_s1(table: *const AzZeroTable, t: f64, s1: *mut f64) -> AzStatus {
    guard(|| {
        let z = get(table, "table")?;
        *out(s1, "s1")? = Oracle::new(&z.0).s1(t)?.s1;
        Ok(())
    })
}

/// Envelope `(1/4) log t / log log t` for `|S(t)|`.
///
/// # Safety
/// `envelope` must be writable.
#[no_mangle]
pub unsafe extern "C" fn az_s_envelope(t: f64, envelope: *mut f64) -> AzStatus {
    guard(|| {
        *out(envelope, "envelope")? = s_envelope(Height::new(t)?);
        Ok(())
    })
}

/// Lower and upper envelopes for `S_1(t)`.
///
/// # Safety
/// `lower` and `upper` must be writable.
#[no_mangle]
pub unsafe extern "C" fn az_s1_envelope(t: f64, lower: *mut f64, upper: *mut f64) -> AzStatus {
    guard(|| {
        let lower = out(lower, "lower")?;
        let upper = out(upper, "upper")?;
        (*lower, *upper) = s1_envelope(Height::new(t)?);
        Ok(())
    })
}

/// Builds an extremal series accurate to `tolerance` on `|x| <= x_max`.
///
/// # Safety
/// `series` must be a writable pointer slot. On success `*series` owns a
/// handle to release with [`az_extremal_free`].
#[no_mangle]
pub unsafe extern "C" fn az_extremal_new(
    parity_code: u32,
    side_code: u32,
    delta: f64,
    x_max: f64,
    tolerance: f64,
    series: *mut *mut AzExtremal,
) -> AzStatus {
    guard(|| {
        let slot = out(series, "series")?;
        *slot = ptr::null_mut();
        let s = ExtremalSeries::build(
            parity(parity_code)?,
            side(side_code)?,
            delta,
            &Truncation::adaptive(x_max, tolerance),
        )?;
        *slot = Box::into_raw(Box::new(AzExtremal(Arc::new(s))));
        Ok(())
    })
}

/// # Safety
/// `series` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn az_extremal_free(series: *mut AzExtremal) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Value of the series at real `x`.
///
/// # Safety
/// `series` must be a live handle and `value` writable.
#[no_mangle]
pub unsafe extern "C" fn az_extremal_eval(series: *const AzExtremal, x: f64, value: *mut f64) -> AzStatus {
    guard(|| {
        let g = get(series, "series")?;
        if !x.is_finite() {
            return Err(invalid(format!("x must be finite, got {x}")));
        }
        *out(value, "value")? = g.0.eval_real(x);
        Ok(())
    })
}

/// Fourier transform of the series at `xi`.
///
/// # Safety
/// `series` must be a live handle; `re` and `im` writable.
#[no_mangle]
pub unsafe extern "C" fn az_extremal_fourier(
    series: *const AzExtremal,
    xi: f64,
    re: *mut f64,
    im: *mut f64,
) -> AzStatus {
    guard(|| {
        let g = get(series, "series")?;
        let re = out(re, "re")?;
        let im = out(im, "im")?;
        let v = g.0.fourier_transform(xi);
        (*re, *im) = (v.re, v.im);
        Ok(())
    })
}

/// Sieves `Lambda(n)` for `n <= cutoff`.
///
/// # Safety
/// `table` must be a writable pointer slot; release the result with
/// [`az_von_mangoldt_free`].
#[no_mangle]
pub unsafe extern "C" fn az_von_mangoldt_new(cutoff: u64, table: *mut *mut AzVonMangoldt) -> AzStatus {
    guard(|| {
        let slot = out(table, "table")?;
        *slot = ptr::null_mut();
        *slot = Box::into_raw(Box::new(AzVonMangoldt(VonMangoldt::sieve(cutoff)?)));
        Ok(())
    })
}

/// # Safety
/// `table` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn az_von_mangoldt_free(table: *mut AzVonMangoldt) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// `Lambda(n)`, zero beyond the cutoff or for a null handle.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn az_von_mangoldt(table: *const AzVonMangoldt, n: u64) -> f64 {
    table.as_ref().map_or(0.0, |t| t.0.lambda(n))
}

unsafe fn run_balance(
    zeros: *const AzZeroTable,
    primes: *const AzVonMangoldt,
    h: impl FnOnce() -> Result<TestFunction, Fail>,
    tolerance: f64,
    report: *mut AzBalance,
) -> AzStatus {
    guard(|| {
        let z = get(zeros, "zeros")?;
        let p = get(primes, "primes")?;
        let report = out(report, "report")?;
        let opts = BalanceOptions {
            quadrature_tol: tolerance,
            ..Default::default()
        };
        *report = balance(&h()?, &z.0, &p.0, &opts)?.into();
        Ok(())
    })
}

/// Explicit-formula balance for the Gaussian of the given width at `center`.
///
/// # Safety
/// `zeros` and `primes` must be live handles and `report` writable.
#[no_mangle]
pub unsafe extern "C" fn az_balance_gaussian(
    zeros: *const AzZeroTable,
    primes: *const AzVonMangoldt,
    center: f64,
    width: f64,
    tolerance: f64,
    report: *mut AzBalance,
) -> AzStatus {
    run_balance(
        zeros,
        primes,
        || Ok(TestFunction::gaussian(center, width)?),
        tolerance,
        report,
    )
}

/// Explicit-formula balance for `x -> g(t - x)` with `g` the given series.
///
/// # Safety
/// `zeros`, `primes` and `series` must be live handles and `report` writable.
#[no_mangle]
pub unsafe extern "C" fn az_balance_extremal(
    zeros: *const AzZeroTable,
    primes: *const AzVonMangoldt,
    series: *const AzExtremal,
    t: f64,
    tolerance: f64,
    report: *mut AzBalance,
) -> AzStatus {
    let g = match series.as_ref() {
        Some(g) => g.0.clone(),
        None => return guard(|| Err(null("series"))),
    };
    run_balance(zeros, primes, || Ok(TestFunction::shifted(g, t)?), tolerance, report)
}
