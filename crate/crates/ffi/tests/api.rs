use std::ffi::{c_char, CStr, CString};
use std::ptr;

use attrib_ffi::*;

const PANEL: &str = "date,FX,EQ\n2002-12-31,0.95,880\n2003-06-30,0.85,950\n2003-12-31,0.79,1110\n";

fn last_error() -> String {
    let p = attrib_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

struct Fixture {
    panel: *mut AttribPanel,
    model: *mut AttribModel,
}

impl Fixture {
    fn new() -> Self {
        let csv = CString::new(PANEL).unwrap();
        let mut panel = ptr::null_mut();
        let mut model = ptr::null_mut();
        unsafe {
            assert_eq!(attrib_panel_from_csv(csv.as_ptr(), &mut panel), AttribStatus::Ok);
            assert_eq!(attrib_model_hedged(0.95, 880.0, &mut model), AttribStatus::Ok);
        }
        Fixture { panel, model }
    }

    fn decompose(&self, g: AttribGranularity, m: AttribMethod, order: &[&str]) -> (AttribStatus, *mut AttribResult) {
        let (t0, t1) = (CString::new("2002-12-31").unwrap(), CString::new("2003-12-31").unwrap());
        let names: Vec<CString> = order.iter().map(|s| CString::new(*s).unwrap()).collect();
        let ptrs: Vec<*const c_char> = names.iter().map(|c| c.as_ptr()).collect();
        let order_ptr = if order.is_empty() { ptr::null() } else { ptrs.as_ptr() };
        let mut out = ptr::null_mut();
        let status = unsafe {
            attrib_decompose(
                self.model,
                self.panel,
                t0.as_ptr(),
                t1.as_ptr(),
                g,
                m,
                order_ptr,
                ptrs.len(),
                &mut out,
            )
        };
        (status, out)
    }
}

impl Drop for Fixture {
    fn drop(&mut self) {
        unsafe {
            attrib_panel_free(self.panel);
            attrib_model_free(self.model);
        }
    }
}

fn contributions(r: *const AttribResult) -> Vec<(String, f64)> {
    unsafe {
        (0..attrib_result_num_factors(r))
            .map(|i| {
                let name = CStr::from_ptr(attrib_result_factor_name(r, i))
                    .to_str()
                    .unwrap()
                    .to_string();
                let mut c = f64::NAN;
                assert_eq!(attrib_result_contribution(r, i, &mut c), AttribStatus::Ok);
                (name, c)
            })
            .collect()
    }
}

#[test]
fn annual_asu_matches_the_hedged_example() {
    let fx = Fixture::new();
    unsafe {
        assert_eq!(attrib_panel_num_dates(fx.panel), 3);
        assert_eq!(attrib_panel_num_factors(fx.panel), 2);
        assert_eq!(attrib_model_num_factors(fx.model), 2);
    }
    let (status, r) = fx.decompose(AttribGranularity::Annual, AttribMethod::Asu, &[]);
    assert_eq!(status, AttribStatus::Ok);
    let c = contributions(r);
    assert_eq!(c[0].0, "FX");
    assert!((c[0].1 - -18.4).abs() < 1e-9);
    assert!((c[1].1 - 200.1).abs() < 1e-9);
    unsafe {
        assert!((attrib_result_delta_p(r) - 181.7).abs() < 1e-9);
        assert_eq!(attrib_result_unexplained(r), 0.0);
        assert_eq!(attrib_result_num_intervals(r), 1);
        assert!(attrib_result_factor_name(r, 2).is_null());
        attrib_result_free(r);
    }
}

#[test]
fn su_with_order_over_monthly_intervals() {
    let fx = Fixture::new();
    let (status, r) = fx.decompose(AttribGranularity::Monthly, AttribMethod::Su, &["EQ", "FX"]);
    assert_eq!(status, AttribStatus::Ok);
    unsafe {
        assert_eq!(attrib_result_num_intervals(r), 2);
        let sum: f64 = contributions(r).iter().map(|(_, c)| c).sum();
        assert!((sum - attrib_result_delta_p(r)).abs() < 1e-9);
        attrib_result_free(r);
    }
}

#[test]
fn price_matches_the_model() {
    let fx = Fixture::new();
    let mut p = 0.0;
    unsafe {
        assert_eq!(
            attrib_model_price(fx.model, [0.79, 1110.0].as_ptr(), 2, &mut p),
            AttribStatus::Ok
        );
        assert!((p - 1017.7).abs() < 1e-9);
        assert_eq!(
            attrib_model_price(fx.model, [0.79].as_ptr(), 1, &mut p),
            AttribStatus::InvalidArgument
        );
    }
}

#[test]
fn errors_carry_status_and_message() {
    let fx = Fixture::new();
    let (status, r) = fx.decompose(AttribGranularity::Annual, AttribMethod::Su, &[]);
    assert_eq!(status, AttribStatus::Data);
    assert!(r.is_null());
    assert!(!last_error().is_empty());

    let (status, _) = fx.decompose(AttribGranularity::Annual, AttribMethod::Su, &["EQ", "IR"]);
    assert_eq!(status, AttribStatus::Data);
    assert!(last_error().contains("IR"));

    let csv = CString::new("date,FX\n2003-01-02,1.0\n2003-01-02,1.1\n").unwrap();
    let mut panel = ptr::null_mut();
    unsafe {
        assert_eq!(attrib_panel_from_csv(csv.as_ptr(), &mut panel), AttribStatus::Data);
        assert!(panel.is_null());
        assert_eq!(
            attrib_panel_from_csv(ptr::null(), &mut panel),
            AttribStatus::NullArgument
        );
        assert_eq!(
            attrib_panel_from_csv(csv.as_ptr(), ptr::null_mut()),
            AttribStatus::NullArgument
        );
        assert!(last_error().contains("out"));

        let mut model = ptr::null_mut();
        assert_eq!(attrib_model_bond(-1.0, &mut model), AttribStatus::Data);
        assert_eq!(attrib_model_bond(10.0, &mut model), AttribStatus::Ok);
        assert!(attrib_last_error().is_null());
        let mut p = 0.0;
        assert_eq!(
            attrib_model_price(model, [-2.0, 0.0, 1.0].as_ptr(), 3, &mut p),
            AttribStatus::Domain
        );
        attrib_model_free(model);

        let path = CString::new("/nonexistent/panel.csv").unwrap();
        assert_eq!(attrib_panel_from_file(path.as_ptr(), &mut panel), AttribStatus::Other);
    }

    let bad = CString::new("31/12/2003").unwrap();
    let good = CString::new("2002-12-31").unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe {
        attrib_decompose(
            fx.model,
            fx.panel,
            good.as_ptr(),
            bad.as_ptr(),
            AttribGranularity::Annual,
            AttribMethod::Oat,
            ptr::null(),
            0,
            &mut out,
        )
    };
    assert_eq!(status, AttribStatus::InvalidArgument);
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        attrib_panel_free(ptr::null_mut());
        attrib_model_free(ptr::null_mut());
        attrib_result_free(ptr::null_mut());
        assert_eq!(attrib_panel_num_dates(ptr::null()), 0);
        assert!(attrib_result_delta_p(ptr::null()).is_nan());
        let mut c = 0.0;
        assert_eq!(
            attrib_result_contribution(ptr::null(), 0, &mut c),
            AttribStatus::NullArgument
        );
    }
    let v = unsafe { CStr::from_ptr(attrib_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
