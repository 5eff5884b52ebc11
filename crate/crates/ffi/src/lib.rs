//! C ABI over the attribution engine.
//!
//! Every fallible entry point returns an [`AttribStatus`]; on failure a
//! description is available from [`attrib_last_error`] on the same thread.
//! Objects are opaque handles released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use attrib::data::{make_partition, read_panel, Granularity};
use attrib::decomp::{decompose_multiperiod, UpdateOrder};
use attrib::models::{ConstantMaturityBond, HedgedForeignEquity};
use attrib::{AttribError, AttributionResult, ErrorKind, FactorId, Method, PricingModel, RiskFactorPanel};
use chrono::NaiveDate;

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttribStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Malformed argument: bad UTF-8, bad date, index out of range.
    InvalidArgument = 2,
    /// Inconsistent configuration.
    Config = 3,
    /// Malformed panel data or inputs that do not match it: unknown factor
    /// or date, missing or invalid update order.
    Data = 4,
    /// Model evaluated outside its domain.
    Domain = 5,
    /// I/O failure or any other error.
    Other = 6,
    /// A panic was caught at the boundary.
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttribMethod {
    Oat = 0,
    Su = 1,
    Asu = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttribGranularity {
    Annual = 0,
    Quarterly = 1,
    Monthly = 2,
    Weekly = 3,
    Daily = 4,
}

/// Risk-factor panel.
pub struct AttribPanel(RiskFactorPanel);

/// Pricing model.
pub struct AttribModel(Box<dyn PricingModel>);

/// Decomposition result.
pub struct AttribResult {
    result: AttributionResult,
    names: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(AttribStatus, String);

impl From<AttribError> for Failure {
    fn from(e: AttribError) -> Self {
        let status = match e.kind() {
            ErrorKind::Config => AttribStatus::Config,
            ErrorKind::Data => AttribStatus::Data,
            ErrorKind::Domain => AttribStatus::Domain,
            ErrorKind::Other => AttribStatus::Other,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(AttribStatus::InvalidArgument, msg.into())
}

fn null(name: &str) -> Failure {
    Failure(AttribStatus::NullArgument, format!("`{name}` is null"))
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> AttribStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            AttribStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal error: {msg}"));
            AttribStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("`{name}` is not valid UTF-8")))
}

unsafe fn date_arg(p: *const c_char, name: &str) -> Result<NaiveDate, Failure> {
    let s = str_arg(p, name)?;
    s.parse()
        .map_err(|_| invalid(format!("`{name}` = '{s}' is not an ISO date")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn write_out<T>(out: *mut T, value: T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_handle<T>(out: *mut *mut T, value: impl FnOnce() -> Result<T, Failure>) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(value()?)));
    Ok(())
}

/// Last error message on this thread, or null if the last call succeeded.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn attrib_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn attrib_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a panel from CSV text (`date,<factor>...`, ISO dates).
///
/// # Safety
/// `csv` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn attrib_panel_from_csv(csv: *const c_char, out: *mut *mut AttribPanel) -> AttribStatus {
    guard(|| {
        let text = str_arg(csv, "csv")?;
        write_handle(out, || Ok(AttribPanel(read_panel(text.as_bytes())?)))
    })
}

/// Reads a panel from a CSV file.
///
/// # Safety
/// `path` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn attrib_panel_from_file(path: *const c_char, out: *mut *mut AttribPanel) -> AttribStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        write_handle(out, || {
            let file = std::fs::File::open(path).map_err(AttribError::Io)?;
            Ok(AttribPanel(read_panel(std::io::BufReader::new(file))?))
        })
    })
}

/// Number of dates in the panel; 0 for a null handle.
///
/// # Safety
/// `panel` must be null or a live panel handle.
#[no_mangle]
pub unsafe extern "C" fn attrib_panel_num_dates(panel: *const AttribPanel) -> usize {
    panel.as_ref().map_or(0, |p| p.0.num_dates())
}

/// Number of factor columns; 0 for a null handle.
///
/// # Safety
/// `panel` must be null or a live panel handle.
#[no_mangle]
pub unsafe extern "C" fn attrib_panel_num_factors(panel: *const AttribPanel) -> usize {
    panel.as_ref().map_or(0, |p| p.0.factors().len())
}

/// # Safety
/// `panel` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn attrib_panel_free(panel: *mut AttribPanel) {
    if !panel.is_null() {
        drop(Box::from_raw(panel));
    }
}

/// Constant-maturity zero bond in foreign currency on factors IR, CS, FX.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn attrib_model_bond(maturity: f64, out: *mut *mut AttribModel) -> AttribStatus {
    guard(|| write_handle(out, || Ok(AttribModel(Box::new(ConstantMaturityBond::new(maturity)?)))))
}

/// FX-hedged foreign equity on factors FX, EQ, hedged at `(x0, y0)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn attrib_model_hedged(x0: f64, y0: f64, out: *mut *mut AttribModel) -> AttribStatus {
    guard(|| write_handle(out, || Ok(AttribModel(Box::new(HedgedForeignEquity::new(x0, y0)?)))))
}

/// Number of model factors; 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live model handle.
#[no_mangle]
pub unsafe extern "C" fn attrib_model_num_factors(model: *const AttribModel) -> usize {
    model.as_ref().map_or(0, |m| m.0.factors().len())
}

/// Prices the model at `values`, given in the model's factor order.
///
/// # Safety
/// `values` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn attrib_model_price(
    model: *const AttribModel,
    values: *const f64,
    len: usize,
    out: *mut f64,
) -> AttribStatus {
    guard(|| {
        let model = ref_arg(model, "model")?;
        if values.is_null() {
            return Err(null("values"));
        }
        let d = model.0.factors().len();
        if len != d {
            return Err(invalid(format!("model has {d} factors, got {len} values")));
        }
        let p = model.0.price(std::slice::from_raw_parts(values, len))?;
        write_out(out, p, "out")
    })
}

/// # Safety
/// `model` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn attrib_model_free(model: *mut AttribModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Decomposes the P&L of `model` over `[start, end]`, split at the given
/// calendar granularity. `order` lists `order_len` factor names and is
/// required for SU only; pass null and 0 otherwise.
///
/// # Safety
/// Handles must be live; strings nul-terminated; `order` must point to
/// `order_len` strings when non-null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn attrib_decompose(
    model: *const AttribModel,
    panel: *const AttribPanel,
    start: *const c_char,
    end: *const c_char,
    granularity: AttribGranularity,
    method: AttribMethod,
    order: *const *const c_char,
    order_len: usize,
    out: *mut *mut AttribResult,
) -> AttribStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let model = ref_arg(model, "model")?;
        let panel = ref_arg(panel, "panel")?;
        let (t0, t1) = (date_arg(start, "start")?, date_arg(end, "end")?);
        let g = match granularity {
            AttribGranularity::Annual => Granularity::Annual,
            AttribGranularity::Quarterly => Granularity::Quarterly,
            AttribGranularity::Monthly => Granularity::Monthly,
            AttribGranularity::Weekly => Granularity::Weekly,
            AttribGranularity::Daily => Granularity::Daily,
        };
        let method = match method {
            AttribMethod::Oat => Method::Oat,
            AttribMethod::Su => Method::Su,
            AttribMethod::Asu => Method::Asu,
        };
        let order = if order.is_null() {
            None
        } else {
            let names = std::slice::from_raw_parts(order, order_len)
                .iter()
                .map(|&p| FactorId::new(str_arg(p, "order")?).map_err(Failure::from))
                .collect::<Result<Vec<_>, _>>()?;
            Some(UpdateOrder::new(names))
        };
        let partition = make_partition(&panel.0, t0, t1, g)?;
        let result = decompose_multiperiod(&*model.0, &panel.0, &partition, method, order.as_ref())?;
        let names = result
            .factors
            .iter()
            .map(|f| CString::new(f.as_str()).map_err(|_| invalid("factor name contains nul")))
            .collect::<Result<_, _>>()?;
        write_handle(out, || Ok(AttribResult { result, names }))
    })
}

/// Number of factors in the result; 0 for a null handle.
///
/// # Safety
/// `result` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn attrib_result_num_factors(result: *const AttribResult) -> usize {
    result.as_ref().map_or(0, |r| r.names.len())
}

/// Name of factor `index`, or null when out of range. Owned by the result.
///
/// # Safety
/// `result` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn attrib_result_factor_name(result: *const AttribResult, index: usize) -> *const c_char {
    result
        .as_ref()
        .and_then(|r| r.names.get(index))
        .map_or(ptr::null(), |c| c.as_ptr())
}

/// Contribution of factor `index`.
///
/// # Safety
/// `result` must be a live result handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn attrib_result_contribution(
    result: *const AttribResult,
    index: usize,
    out: *mut f64,
) -> AttribStatus {
    guard(|| {
        let r = ref_arg(result, "result")?;
        let c = *r
            .result
            .contributions
            .get(index)
            .ok_or_else(|| invalid(format!("factor index {index} out of range")))?;
        write_out(out, c, "out")
    })
}

/// Part of the P&L not assigned to any factor; zero for SU and ASU.
///
/// # Safety
/// `result` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn attrib_result_unexplained(result: *const AttribResult) -> f64 {
    result.as_ref().map_or(f64::NAN, |r| r.result.unexplained)
}

/// Total P&L over the period.
///
/// # Safety
/// `result` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn attrib_result_delta_p(result: *const AttribResult) -> f64 {
    result.as_ref().map_or(f64::NAN, |r| r.result.delta_p)
}

/// Number of sub-intervals the period was split into.
///
/// # Safety
/// `result` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn attrib_result_num_intervals(result: *const AttribResult) -> usize {
    result.as_ref().map_or(0, |r| r.result.partition.len())
}

/// # Safety
/// `result` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn attrib_result_free(result: *mut AttribResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}
