use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use superline_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn session(decls: &str, trunc: usize) -> *mut SlSession {
    let mut s = ptr::null_mut();
    let d = c(decls);
    assert_eq!(unsafe { sl_session_new(d.as_ptr(), trunc, &mut s) }, SlStatus::Ok);
    s
}

fn op(s: *const SlSession, src: &str) -> *mut SlOperator {
    let mut o = ptr::null_mut();
    let t = c(src);
    let st = unsafe { sl_operator_parse(s, t.as_ptr(), &mut o) };
    assert_eq!(st, SlStatus::Ok, "{src}: {}", last_error());
    o
}

fn text(o: *const SlOperator) -> String {
    let mut p: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { sl_operator_to_string(o, &mut p) }, SlStatus::Ok);
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { sl_string_free(p) };
    s
}

fn last_error() -> String {
    let p = sl_last_error();
    if p.is_null() {
        String::new()
    } else {
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }
}

#[test]
fn compose_apply_and_divide() {
    let s = session("", 4);
    let a = op(s, "D + xi");
    let mut sq = ptr::null_mut();
    assert_eq!(unsafe { sl_operator_compose(a, a, &mut sq) }, SlStatus::Ok);
    assert_eq!(text(sq), "D^2 + 1");
    let mut order = 0;
    assert_eq!(unsafe { sl_operator_order(sq, &mut order) }, SlStatus::Ok);
    assert_eq!(order, 2);

    let f = op(s, "1/(1 - x)");
    let d = op(s, "D");
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { sl_operator_apply(d, f, &mut g) }, SlStatus::Ok);
    assert_eq!(text(g), "xi + 2*xi*x + 3*xi*x^2 + 4*xi*x^3");

    let n = op(s, "x*D^2");
    let (mut q, mut r) = (ptr::null_mut(), ptr::null_mut());
    for side in [SlSide::Right, SlSide::Left] {
        assert_eq!(unsafe { sl_operator_divide(n, a, side, &mut q, &mut r) }, SlStatus::Ok);
        let mut back = ptr::null_mut();
        let (x, y) = if side == SlSide::Right { (q, a) } else { (a, q) };
        assert_eq!(unsafe { sl_operator_compose(x, y, &mut back) }, SlStatus::Ok);
        let joined = format!("({}) + ({})", text(back), text(r));
        let sum = op(s, &joined);
        let mut eq = 0;
        assert_eq!(unsafe { sl_operator_equal(sum, n, &mut eq) }, SlStatus::Ok);
        assert_eq!(eq, 1, "{side:?}: {joined}");
        unsafe {
            sl_operator_free(back);
            sl_operator_free(sum);
            sl_operator_free(q);
            sl_operator_free(r);
        }
    }
    unsafe {
        for o in [a, sq, f, d, g, n] {
            sl_operator_free(o);
        }
        sl_session_free(s);
    }
}

#[test]
fn errors_carry_a_status_and_a_message() {
    let s = session("", 0);
    let mut o = ptr::null_mut();
    let bad = c("D + ");
    assert_eq!(unsafe { sl_operator_parse(s, bad.as_ptr(), &mut o) }, SlStatus::Parse);
    assert!(o.is_null());
    assert!(last_error().starts_with("parse error"), "{}", last_error());
    let undeclared = c("a1*D");
    assert_eq!(unsafe { sl_operator_parse(s, undeclared.as_ptr(), &mut o) }, SlStatus::UndeclaredSymbol);

    // degenerate divisor: top coefficient x is not invertible at 0
    let n = op(s, "D^3");
    let m = op(s, "x*D");
    let (mut q, mut r) = (ptr::null_mut(), ptr::null_mut());
    let st = unsafe { sl_operator_divide(n, m, SlSide::Right, &mut q, &mut r) };
    assert_eq!(st, SlStatus::DegenerateDivisor, "{}", last_error());

    // a successful call clears the message
    let one = op(s, "1");
    assert!(last_error().is_empty());

    assert_eq!(unsafe { sl_operator_parse(ptr::null(), bad.as_ptr(), &mut o) }, SlStatus::NullArgument);
    let symbolic = session("declare even u", 0);
    let u = op(symbolic, "u");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { sl_operator_compose(one, u, &mut out) }, SlStatus::ModelMismatch);
    unsafe {
        for o in [n, m, one, u] {
            sl_operator_free(o);
        }
        sl_session_free(s);
        sl_session_free(symbolic);
    }
}

#[test]
fn kernels_and_darboux() {
    let s = session("", 8);
    let l0 = op(s, "D^2");
    let mut basis = ptr::null_mut();
    assert_eq!(unsafe { sl_kernel_basis(l0, 0, &mut basis) }, SlStatus::Ok);
    assert_eq!(unsafe { sl_list_len(basis) }, 2);
    let mut first = ptr::null_mut();
    assert_eq!(unsafe { sl_list_get(basis, 0, &mut first) }, SlStatus::Ok);
    assert_eq!(text(first), "1");
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { sl_reconstruct(basis, &mut back) }, SlStatus::Ok);
    assert_eq!(text(back), "D^2");
    assert_eq!(unsafe { sl_list_get(basis, 5, &mut first) }, SlStatus::DimensionMismatch);

    let l = op(s, "D^2 - 1");
    let phi = op(s, "1 + x + x^2/2 + x^3/6 + x^4/24 + x^5/120 + x^6/720 + x^7/5040 + x^8/40320");
    let (mut m, mut l1) = (ptr::null_mut(), ptr::null_mut());
    let st = unsafe { sl_darboux_elementary(l, phi, &mut m, &mut l1) };
    assert_eq!(st, SlStatus::Ok, "{}", last_error());
    assert_eq!(text(m), "D - xi");
    assert_eq!(text(l1), "D^2 - 1");

    let mut flag = ptr::null_mut();
    assert_eq!(unsafe { sl_list_new(&mut flag) }, SlStatus::Ok);
    let one = op(s, "1");
    let xi = op(s, "xi");
    unsafe {
        sl_list_push(flag, one);
        sl_list_push(flag, xi);
    }
    let (mut mm, mut lr) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(unsafe { sl_darboux_factorize(l0, flag, &mut mm, &mut lr) }, SlStatus::Ok);
    assert_eq!(text(mm), "D^2");
    assert_eq!(text(lr), "D^2");
    unsafe {
        for o in [l0, first, back, l, phi, m, l1, one, xi, mm, lr] {
            sl_operator_free(o);
        }
        sl_list_free(basis);
        sl_list_free(flag);
        sl_session_free(s);
    }
}

#[test]
fn berezinians() {
    let s = session("declare constant odd t\ndeclare constant even y", 0);
    let src = c("format rows=+- cols=+-\nwrong row 0\n[[t, y],\n [t, y]]\n");
    let mut a = ptr::null_mut();
    assert_eq!(unsafe { sl_matrix_parse(s, src.as_ptr(), &mut a) }, SlStatus::Ok, "{}", last_error());
    let mut b = ptr::null_mut();
    assert_eq!(unsafe { sl_ber(a, 0, &mut b) }, SlStatus::Ok);
    assert_eq!(text(b), "0");
    unsafe { sl_matrix_free(a) };

    let c2 = session("", 4);
    let src = c("format rows=+- cols=+-\n[[1 + x, xi], [xi, 2]]");
    assert_eq!(unsafe { sl_matrix_parse(c2, src.as_ptr(), &mut a) }, SlStatus::Ok);
    let (mut x, mut y) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(unsafe { sl_ber(a, 0, &mut x) }, SlStatus::Ok);
    assert_eq!(unsafe { sl_ber(a, 1, &mut y) }, SlStatus::Ok);
    let mut prod = ptr::null_mut();
    assert_eq!(unsafe { sl_operator_compose(x, y, &mut prod) }, SlStatus::Ok);
    assert_eq!(text(prod), "1");
    let undefined = c("format rows=+- cols=+-\n[[1, xi], [xi, x]]");
    let mut u = ptr::null_mut();
    assert_eq!(unsafe { sl_matrix_parse(c2, undefined.as_ptr(), &mut u) }, SlStatus::Ok);
    assert_eq!(unsafe { sl_ber(u, 0, &mut x) }, SlStatus::BerUndefined);
    let with_decl = c("declare odd z\nformat rows=+ cols=+\n[[1]]");
    assert_eq!(unsafe { sl_matrix_parse(c2, with_decl.as_ptr(), &mut u) }, SlStatus::Parse);
    unsafe {
        sl_matrix_free(a);
        sl_operator_free(b);
        sl_operator_free(prod);
        sl_session_free(s);
        sl_session_free(c2);
    }
}

#[test]
fn run_mirrors_the_command_line() {
    let args = [c("darboux"), c("dress"), c("--n"), c("1")];
    let argv: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
    let (mut out, mut err, mut code): (*mut c_char, *mut c_char, c_int) = (ptr::null_mut(), ptr::null_mut(), -1);
    let st = unsafe { sl_run(argv.len(), argv.as_ptr(), ptr::null(), &mut out, &mut err, &mut code) };
    assert_eq!(st, SlStatus::Ok);
    assert_eq!(code, 0);
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
    assert!(text.starts_with("n = 1, r odd (r = 2s+1)\nb1 = -a1 + 2*c1\n"), "{text}");
    unsafe {
        sl_string_free(out);
        sl_string_free(err);
    }
    let args = [c("compose")];
    let argv: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
    let input = c("D o (\n");
    unsafe { sl_run(1, argv.as_ptr(), input.as_ptr(), &mut out, &mut err, &mut code) };
    assert_eq!(code, 2);
    assert!(unsafe { CStr::from_ptr(err) }.to_str().unwrap().starts_with("error: parse error"));
    unsafe {
        sl_string_free(out);
        sl_string_free(err);
    }
}

#[test]
fn version_and_null_handles() {
    let v = unsafe { CStr::from_ptr(sl_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
    unsafe {
        sl_operator_free(ptr::null_mut());
        sl_session_free(ptr::null_mut());
        sl_list_free(ptr::null_mut());
        sl_matrix_free(ptr::null_mut());
        sl_string_free(ptr::null_mut());
    }
    assert_eq!(unsafe { sl_list_len(ptr::null()) }, 0);
    assert_eq!(unsafe { sl_session_is_symbolic(ptr::null()) }, 0);
}
