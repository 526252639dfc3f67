use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use qnoise_ffi::*;

fn last_error() -> String {
    let p = qn_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn bell() -> *mut QnState {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qn_bell_state(3, &mut s) }, QnStatus::Ok);
    s
}

#[test]
fn bell_state_measures() {
    let s = bell();
    let (mut n, mut gp, mut gr) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(qn_negativity(s, &mut n), QnStatus::Ok);
        assert_eq!(qn_gd_lower_bound(s, QnGdConvention::Paper, &mut gp), QnStatus::Ok);
        assert_eq!(qn_gd_lower_bound(s, QnGdConvention::Raw, &mut gr), QnStatus::Ok);
        qn_state_free(s);
    }
    assert!((n - 1.0).abs() < 1e-12);
    assert!((gp - 4.0 / 3.0).abs() < 1e-12);
    assert!((gr - 2.0 / 3.0).abs() < 1e-12);
    assert!(qn_last_error_message().is_null());
}

#[test]
fn evolve_and_read_back() {
    let s = bell();
    let mut e = ptr::null_mut();
    let mut n = 0.0;
    unsafe {
        let st = qn_evolve(s, QnChannel::Depolarizing, QnChannel::Depolarizing, 0.5, 0.5, 1.0, &mut e);
        assert_eq!(st, QnStatus::Ok);
        assert_eq!(qn_negativity(e, &mut n), QnStatus::Ok);
    }
    let expected = qnoise::oracle::analytic_negativity_depolarizing(0.5, 0.5, 1.0).unwrap();
    assert!((n - expected).abs() < 1e-10, "{n} vs {expected}");

    let (mut d1, mut d2) = (0, 0);
    let mut re = vec![0.0; 81];
    let mut im = vec![0.0; 81];
    unsafe {
        assert_eq!(qn_state_dims(e, &mut d1, &mut d2), QnStatus::Ok);
        assert_eq!(qn_state_entries(e, re.as_mut_ptr(), im.as_mut_ptr(), 81), QnStatus::Ok);
    }
    assert_eq!((d1, d2), (3, 3));
    let trace: f64 = (0..9).map(|i| re[i * 9 + i]).sum();
    assert!((trace - 1.0).abs() < 1e-12);

    // Round trip through the constructor.
    let mut back = ptr::null_mut();
    let mut n2 = 0.0;
    unsafe {
        assert_eq!(qn_state_from_parts(3, 3, re.as_ptr(), im.as_ptr(), &mut back), QnStatus::Ok);
        assert_eq!(qn_negativity(back, &mut n2), QnStatus::Ok);
        qn_state_free(back);
        qn_state_free(e);
        qn_state_free(s);
    }
    assert!((n - n2).abs() < 1e-12);
}

#[test]
fn errors_are_reported() {
    let mut s = ptr::null_mut();
    let mut x = 0.0;
    unsafe {
        assert_eq!(qn_negativity(ptr::null(), &mut x), QnStatus::NullPointer);
        assert!(last_error().contains("null"));

        assert_eq!(qn_bell_state(0, &mut s), QnStatus::InvalidArgument);
        assert!(s.is_null());

        // Trace 2 is not a state.
        let mut re = vec![0.0; 81];
        re[0] = 2.0;
        assert_eq!(qn_state_from_parts(3, 3, re.as_ptr(), ptr::null(), &mut s), QnStatus::InvalidState);
        assert!(!last_error().is_empty());

        let b = bell();
        let mut small = [0.0; 4];
        let mut small_im = [0.0; 4];
        assert_eq!(qn_state_entries(b, small.as_mut_ptr(), small_im.as_mut_ptr(), 4), QnStatus::BufferTooSmall);
        assert_eq!(qn_evolve(b, QnChannel::Dephasing, QnChannel::Dephasing, -1.0, 0.5, 1.0, &mut s), QnStatus::InvalidArgument);
        assert_eq!(qn_gd_exact(b, 0, 0, &mut x), QnStatus::InvalidArgument);
        qn_state_free(b);
        qn_state_free(ptr::null_mut());
    }
}

#[test]
fn exact_gd_bounds_lower_bound() {
    let s = bell();
    let (mut lo, mut ex) = (0.0, 0.0);
    unsafe {
        assert_eq!(qn_gd_lower_bound(s, QnGdConvention::Raw, &mut lo), QnStatus::Ok);
        assert_eq!(qn_gd_exact(s, 4, 7, &mut ex), QnStatus::Ok);
        qn_state_free(s);
    }
    assert!(ex >= lo - 1e-8, "exact {ex} < bound {lo}");
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(qn_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_valid_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/qnoise.h");
    let text = std::fs::read_to_string(&header).expect("generated header");
    for sym in ["qn_bell_state", "qn_state_from_parts", "qn_evolve", "qn_gd_exact", "qn_last_error_message", "typedef struct QnState QnState"] {
        assert!(text.contains(sym), "header lacks {sym}");
    }
    let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-x", "c"]).arg(&header).status() else {
        eprintln!("no C compiler; syntax check skipped");
        return;
    };
    assert!(status.success());
}
