use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use ltpsurv_ffi::*;

fn last_error() -> String {
    let p = ltp_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn lognormal() -> *mut LtpDistribution {
    let mut d = ptr::null_mut();
    let s = unsafe { ltp_distribution_new(LtpBaseline::Normal, LtpParam::EpsilonSkew, 0.0, 1.0, 0.0, f64::NAN, &mut d) };
    assert_eq!(s, LtpStatus::Ok);
    d
}

#[test]
fn distribution_round_trip() {
    let d = lognormal();
    let mut v = 0.0;
    unsafe {
        assert_eq!(ltp_pdf(d, 1.0, &mut v), LtpStatus::Ok);
        assert!((v - 0.398_942_280_401_432_7).abs() < 1e-15);
        assert_eq!(ltp_cdf(d, 1.0, &mut v), LtpStatus::Ok);
        assert_eq!(v, 0.5);
        let mut q = 0.0;
        assert_eq!(ltp_quantile(d, 0.9, &mut q), LtpStatus::Ok);
        assert_eq!(ltp_cdf(d, q, &mut v), LtpStatus::Ok);
        assert!((v - 0.9).abs() < 1e-12);
        let (mut s, mut h, mut f) = (0.0, 0.0, 0.0);
        ltp_survival(d, 2.0, &mut s);
        ltp_hazard(d, 2.0, &mut h);
        ltp_pdf(d, 2.0, &mut f);
        assert!((h * s - f).abs() < 1e-15);
        ltp_distribution_free(d);
    }
}

#[test]
fn errors_set_status_and_message() {
    let d = lognormal();
    let mut v = 0.0;
    unsafe {
        assert_eq!(ltp_pdf(d, -1.0, &mut v), LtpStatus::Domain);
        assert!(last_error().contains("positive"), "{}", last_error());
        assert_eq!(ltp_pdf(ptr::null(), 1.0, &mut v), LtpStatus::NullPointer);
        assert!(last_error().contains("`d`"));
        assert_eq!(ltp_pdf(d, 1.0, ptr::null_mut()), LtpStatus::NullPointer);
        let mut bad = ptr::null_mut();
        let s = ltp_distribution_new(LtpBaseline::Logistic, LtpParam::EpsilonSkew, 0.0, -1.0, 0.0, f64::NAN, &mut bad);
        assert_eq!(s, LtpStatus::Domain);
        assert!(bad.is_null());
        ltp_distribution_free(d);
        ltp_distribution_free(ptr::null_mut());
    }
}

#[test]
fn sample_then_fit() {
    let mut truth = ptr::null_mut();
    let mut draws = vec![0.0; 600];
    unsafe {
        let s = ltp_distribution_new(LtpBaseline::Logistic, LtpParam::EpsilonSkew, 1.0, 0.5, 0.4, f64::NAN, &mut truth);
        assert_eq!(s, LtpStatus::Ok);
        assert_eq!(ltp_sample(truth, 9, draws.len(), draws.as_mut_ptr()), LtpStatus::Ok);
        let mut again = vec![0.0; 600];
        ltp_sample(truth, 9, again.len(), again.as_mut_ptr());
        assert_eq!(draws, again);
        ltp_distribution_free(truth);

        let opts = ltp_fit_options_default(LtpBaseline::Logistic);
        let mut fit = ptr::null_mut();
        let s = ltp_fit(draws.as_ptr(), ptr::null(), ptr::null(), draws.len(), &opts, &mut fit);
        assert_eq!(s, LtpStatus::Ok);
        assert_eq!(ltp_fit_n_params(fit), 3);
        let want = [("mu", 1.0), ("sigma", 0.5), ("gamma", 0.4)];
        for (i, (name, value)) in want.iter().enumerate() {
            let (mut v, mut n) = (0.0, ptr::null());
            assert_eq!(ltp_fit_estimate(fit, i, &mut v, &mut n), LtpStatus::Ok);
            assert_eq!(CStr::from_ptr(n).to_str().unwrap(), *name);
            // μ and γ trade off strongly, so μ̂ is the noisiest of the three
            assert!((v - value).abs() < 0.25, "{name} {v}");
        }
        let mut v = 0.0;
        assert_eq!(ltp_fit_estimate(fit, 3, &mut v, ptr::null_mut()), LtpStatus::Domain);
        let (mut ll, mut aic) = (0.0, 0.0);
        ltp_fit_loglik(fit, &mut ll, &mut aic);
        assert_eq!(aic, 6.0 - 2.0 * ll);
        let mut law = ptr::null_mut();
        assert_eq!(ltp_fit_distribution(fit, &mut law), LtpStatus::Ok);
        assert_eq!(ltp_cdf(law, 1f64.exp(), &mut v), LtpStatus::Ok);
        assert!((v - 0.7).abs() < 0.15, "{v}");
        ltp_distribution_free(law);
        ltp_fit_free(fit);
    }
}

#[test]
fn censored_fit_and_non_convergence() {
    let times = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0];
    let upper = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 14.0];
    let mut cens = [LtpCensoring::Exact; 12];
    cens[10] = LtpCensoring::Right;
    cens[11] = LtpCensoring::Interval;
    let mut opts = ltp_fit_options_default(LtpBaseline::Normal);
    opts.fix_gamma = true;
    let mut fit = ptr::null_mut();
    unsafe {
        let s = ltp_fit(times.as_ptr(), upper.as_ptr(), cens.as_ptr(), 12, &opts, &mut fit);
        assert_eq!(s, LtpStatus::Ok);
        assert_eq!(ltp_fit_n_params(fit), 2);
        ltp_fit_free(fit);

        // interval rows need the upper bounds
        let s = ltp_fit(times.as_ptr(), ptr::null(), cens.as_ptr(), 12, &opts, &mut fit);
        assert_eq!(s, LtpStatus::NullPointer);

        let mut sas = ltp_fit_options_default(LtpBaseline::SinhArcsinh);
        sas.restarts = 0;
        let mut fit = ptr::null_mut();
        let s = ltp_fit(times.as_ptr(), ptr::null(), ptr::null(), 12, &sas, &mut fit);
        assert!(matches!(s, LtpStatus::Ok | LtpStatus::NotConverged));
        assert!(!fit.is_null());
        ltp_fit_free(fit);
    }
}

#[test]
fn aft_model() {
    // log T = 2 + 0.5 x + logistic noise
    let n = 300;
    let mut base = ptr::null_mut();
    let mut noise = vec![0.0; n];
    unsafe {
        ltp_distribution_new(LtpBaseline::Logistic, LtpParam::EpsilonSkew, 0.0, 0.3, 0.0, f64::NAN, &mut base);
        ltp_sample(base, 4, n, noise.as_mut_ptr());
        ltp_distribution_free(base);
    }
    let x: Vec<f64> = (0..n).map(|i| (i % 10) as f64 / 5.0).collect();
    // the draws are e^ε
    let times: Vec<f64> = x.iter().zip(&noise).map(|(x, e)| (2.0 + 0.5 * x).exp() * e).collect();
    let opts = ltp_fit_options_default(LtpBaseline::Logistic);
    let mut m = ptr::null_mut();
    unsafe {
        let s = ltp_aft_fit(times.as_ptr(), ptr::null(), ptr::null(), x.as_ptr(), n, 1, true, &opts, &mut m);
        assert_eq!(s, LtpStatus::Ok, "{}", last_error());
        assert_eq!(ltp_aft_n_coefficients(m), 2);
        let mut beta = [0.0; 2];
        let (mut sigma, mut gamma, mut delta) = (0.0, 0.0, 0.0);
        ltp_aft_coefficients(m, beta.as_mut_ptr(), &mut sigma, &mut gamma, &mut delta);
        assert!((beta[1] - 0.5).abs() < 0.1, "{beta:?}");
        assert!(delta.is_nan());
        let (mut ll, mut aic) = (0.0, 0.0);
        ltp_aft_loglik(m, &mut ll, &mut aic);
        assert_eq!(aic, 8.0 - 2.0 * ll);

        let xi = [1.0];
        let mut loc = 0.0;
        assert_eq!(ltp_aft_location(m, xi.as_ptr(), LtpCentring::Median, 0.0, &mut loc), LtpStatus::Ok);
        assert!((loc - 2.5).abs() < 0.15, "{loc}");
        let (mut lo, mut hi) = (0.0, 0.0);
        assert_eq!(ltp_aft_prediction_interval(m, xi.as_ptr(), 10.0, 0.05, 0.05, &mut lo, &mut hi), LtpStatus::Ok);
        let mut g = 0.0;
        ltp_aft_remaining_life_cdf(m, xi.as_ptr(), 10.0, lo, &mut g);
        assert!((g - 0.05).abs() < 1e-9);
        ltp_aft_remaining_life_cdf(m, xi.as_ptr(), 10.0, hi, &mut g);
        assert!((g - 0.95).abs() < 1e-9);
        assert_eq!(ltp_aft_remaining_life_cdf(m, xi.as_ptr(), 10.0, 5.0, &mut g), LtpStatus::Domain);
        ltp_aft_free(m);
    }
}

#[test]
fn header_declares_the_api_and_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/ltpsurv.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for symbol in [
        "ltp_last_error",
        "ltp_distribution_new",
        "ltp_pdf",
        "ltp_cdf",
        "ltp_survival",
        "ltp_hazard",
        "ltp_quantile",
        "ltp_sample",
        "ltp_fit(",
        "ltp_fit_estimate",
        "ltp_aft_fit",
        "ltp_aft_prediction_interval",
        "typedef struct LtpFit LtpFit",
    ] {
        assert!(text.contains(symbol), "missing {symbol}");
    }
    // a C compiler is part of the toolchain wherever the cdylib is linked
    let Ok(out) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"])
        .arg(&header)
        .output()
    else {
        eprintln!("no C compiler found; syntax check skipped");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
