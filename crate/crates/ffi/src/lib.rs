//! C interface to the superline operator algebra.
//!
//! Objects are opaque handles owned by the caller and released with the
//! matching `*_free` function. Every fallible call returns an [`SlStatus`];
//! on failure [`sl_last_error`] describes the problem until the next call
//! on the same thread. Strings returned through `char **` outputs are
//! released with [`sl_string_free`].
//!
//! A session fixes the scalar model, the declared symbols and the
//! truncation order; operators, functions and matrices are parsed in a
//! session using the same text syntax as the command-line tool. A function
//! is an operator of order 0.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use superline::cli::commands::Ctx;
use superline::cli::parse::{parse_document, parse_expr, Document, Item, ModelName};
use superline::cli::session::{Evaluator, Model, OutputFormat, Printer, SessionConfig};
use superline::darboux::{elementary_dt, factorize_dt};
use superline::kernel::kernel_basis;
use superline::supermatrix::{ber, ber_star, FormatMatrix};
use superline::superop::{divide_left, divide_right, SuperDiffOp};
use superline::wronskian::reconstruct_operator;
use superline::{Error, SuperFunction, SymbolicScalar, Truncation};

/// Outcome of a call. Values other than `Ok` name the failure; the
/// mathematical ones correspond one to one to the library's error kinds.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlStatus {
    Ok = 0,
    NullArgument,
    InvalidUtf8,
    Panic,
    Parse,
    UndeclaredSymbol,
    ParityConflict,
    ModelMismatch,
    NotInvertible,
    TruncationExceeded,
    NotConstant,
    DegenerateDivisor,
    DegenerateOperator,
    NotAKernelElement,
    BerUndefined,
    BerStarUndefined,
    IllegalWrongness,
    CofactorUndefined,
    ParityMismatch,
    DimensionMismatch,
    SingularMatrix,
    KernelNotInGeneralPosition,
    InfiniteDimensionalKernel,
    RemainderNotConstant,
    NotInvariantFlag,
    FlagNotInGeneralPosition,
}

impl From<&Error> for SlStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parse { .. } => SlStatus::Parse,
            Error::UndeclaredSymbol(_) => SlStatus::UndeclaredSymbol,
            Error::ParityConflict(_) => SlStatus::ParityConflict,
            Error::ModelMismatch(_) => SlStatus::ModelMismatch,
            Error::NotInvertible(_) => SlStatus::NotInvertible,
            Error::TruncationExceeded(_) => SlStatus::TruncationExceeded,
            Error::NotConstant(_) => SlStatus::NotConstant,
            Error::DegenerateDivisor(_) => SlStatus::DegenerateDivisor,
            Error::DegenerateOperator(_) => SlStatus::DegenerateOperator,
            Error::NotAKernelElement(_) => SlStatus::NotAKernelElement,
            Error::BerUndefined(_) => SlStatus::BerUndefined,
            Error::BerStarUndefined(_) => SlStatus::BerStarUndefined,
            Error::IllegalWrongness(_) => SlStatus::IllegalWrongness,
            Error::CofactorUndefined(_) => SlStatus::CofactorUndefined,
            Error::ParityMismatch(_) => SlStatus::ParityMismatch,
            Error::DimensionMismatch(_) => SlStatus::DimensionMismatch,
            Error::SingularMatrix(_) => SlStatus::SingularMatrix,
            Error::KernelNotInGeneralPosition(_) => SlStatus::KernelNotInGeneralPosition,
            Error::InfiniteDimensionalKernel(_) => SlStatus::InfiniteDimensionalKernel,
            Error::RemainderNotConstant(_) => SlStatus::RemainderNotConstant,
            Error::NotInvariantFlag(_) => SlStatus::NotInvariantFlag,
            Error::FlagNotInGeneralPosition(_) => SlStatus::FlagNotInGeneralPosition,
        }
    }
}

/// Which side the divisor stands on.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlSide {
    /// `N = Q∘M + R`
    Right = 0,
    /// `N = M∘Q + R`
    Left = 1,
}

/// Declarations, model and truncation order.
pub struct SlSession {
    cfg: Arc<SessionConfig>,
}

#[derive(Clone)]
enum Op {
    Concrete(SuperDiffOp<SuperFunction>),
    Symbolic(SuperDiffOp<SymbolicScalar>),
}

/// An operator, or a function when its order is 0.
#[derive(Clone)]
pub struct SlOperator {
    cfg: Arc<SessionConfig>,
    op: Op,
}

/// A growable list of operators (kernel bases, flags).
#[derive(Default)]
pub struct SlOperatorList {
    items: Vec<SlOperator>,
}

enum Mat {
    Concrete(FormatMatrix<SuperFunction>),
    Symbolic(FormatMatrix<SymbolicScalar>),
}

/// An even (or wrong) matrix with a parity format.
pub struct SlMatrix {
    cfg: Arc<SessionConfig>,
    mat: Mat,
}

enum Failure {
    Status(SlStatus, String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Res<T> = Result<T, Failure>;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Res<()>) -> SlStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    let (status, msg) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => return SlStatus::Ok,
        Ok(Err(Failure::Status(s, m))) => (s, m),
        Ok(Err(Failure::Lib(e))) => ((&e).into(), e.to_string()),
        Err(p) => {
            let text = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            (SlStatus::Panic, format!("internal error: {text}"))
        }
    };
    set_last_error(&msg);
    status
}

fn null(what: &str) -> Failure {
    Failure::Status(SlStatus::NullArgument, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Res<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Status(SlStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Res<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T, what: &str) -> Res<()> {
    if out.is_null() {
        return Err(null(what));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Res<()> {
    if out.is_null() {
        return Err(null("output string"));
    }
    *out = CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw();
    Ok(())
}

fn mismatch() -> Failure {
    Error::ModelMismatch("operands come from sessions with different models".into()).into()
}

/// Rejects anything but the given items: sessions own the declarations.
fn body_only(doc: &Document) -> Res<()> {
    if !doc.declarations.is_empty() || doc.model.is_some() || doc.trunc.is_some() {
        return Err(Failure::Status(
            SlStatus::Parse,
            "declarations, `model` and `trunc` belong to the session".into(),
        ));
    }
    Ok(())
}

impl SlOperator {
    fn render(&self) -> String {
        let p = Printer { cfg: &self.cfg };
        match &self.op {
            Op::Concrete(o) => p.op(o),
            Op::Symbolic(o) => p.op(o),
        }
    }

    fn with(&self, op: Op) -> SlOperator {
        SlOperator {
            cfg: self.cfg.clone(),
            op,
        }
    }

    fn concrete(&self) -> Res<&SuperDiffOp<SuperFunction>> {
        match &self.op {
            Op::Concrete(o) => Ok(o),
            Op::Symbolic(_) => Err(Error::ModelMismatch("this needs the concrete model".into()).into()),
        }
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn sl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates a session from declaration lines such as
/// `"declare odd a1\ndeclare even a2"` (null or empty for none). The model
/// is inferred from the declarations unless the text has a `model` line.
/// `trunc` is the highest power of x kept; 0 selects the default.
///
/// # Safety
/// `declarations` must be null or a valid C string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_session_new(
    declarations: *const c_char,
    trunc: usize,
    out: *mut *mut SlSession,
) -> SlStatus {
    guard(|| {
        let src = if declarations.is_null() {
            ""
        } else {
            text(declarations, "declarations")?
        };
        let doc = parse_document(src)?;
        if !doc.items.is_empty() {
            return Err(Failure::Status(
                SlStatus::Parse,
                "a session takes declarations only".into(),
            ));
        }
        let t = if trunc == 0 { Truncation::default() } else { Truncation(trunc) };
        let cfg = SessionConfig::from_document(&doc, None, t, OutputFormat::Text)?;
        put(out, SlSession { cfg: Arc::new(cfg) }, "out")
    })
}

/// Non-zero when the session uses the symbolic model.
///
/// # Safety
/// `session` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn sl_session_is_symbolic(session: *const SlSession) -> c_int {
    session
        .as_ref()
        .is_some_and(|s| s.cfg.model == ModelName::Symbolic) as c_int
}

/// # Safety
/// `session` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_session_free(session: *mut SlSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Parses and evaluates an operator or function, e.g. `"D^2 + x*D"`.
///
/// # Safety
/// Pointers must be valid; `src` must be a C string.
#[no_mangle]
pub unsafe extern "C" fn sl_operator_parse(
    session: *const SlSession,
    src: *const c_char,
    out: *mut *mut SlOperator,
) -> SlStatus {
    guard(|| {
        let s = get(session, "session")?;
        let e = parse_expr(text(src, "source")?)?;
        let ev = Evaluator::new(&s.cfg);
        let op = match s.cfg.model {
            ModelName::Concrete => Op::Concrete(ev.operator(&e)?),
            ModelName::Symbolic => Op::Symbolic(ev.operator(&e)?),
        };
        put(out, SlOperator { cfg: s.cfg.clone(), op }, "out")
    })
}

/// Copies an operator handle.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_operator_clone(
    op: *const SlOperator,
    out: *mut *mut SlOperator,
) -> SlStatus {
    guard(|| put(out, get(op, "operator")?.clone(), "out"))
}

/// # Safety
/// `op` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_operator_free(op: *mut SlOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Canonical text of an operator.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_operator_to_string(
    op: *const SlOperator,
    out: *mut *mut c_char,
) -> SlStatus {
    guard(|| put_string(out, get(op, "operator")?.render()))
}

/// Order of the highest non-zero coefficient; 0 for functions and for 0.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_operator_order(op: *const SlOperator, out: *mut usize) -> SlStatus {
    guard(|| {
        let o = get(op, "operator")?;
        let order = match &o.op {
            Op::Concrete(x) => x.effective_order(),
            Op::Symbolic(x) => x.effective_order(),
        };
        if out.is_null() {
            return Err(null("out"));
        }
        *out = order.unwrap_or(0);
        Ok(())
    })
}

/// Writes 1 to `out` when the operators are equal (series compared where
/// both are known), else 0.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_operator_equal(
    a: *const SlOperator,
    b: *const SlOperator,
    out: *mut c_int,
) -> SlStatus {
    guard(|| {
        let eq = match (&get(a, "a")?.op, &get(b, "b")?.op) {
            (Op::Concrete(x), Op::Concrete(y)) => x == y,
            (Op::Symbolic(x), Op::Symbolic(y)) => x == y,
            _ => return Err(mismatch()),
        };
        if out.is_null() {
            return Err(null("out"));
        }
        *out = eq as c_int;
        Ok(())
    })
}

/// `a∘b`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_operator_compose(
    a: *const SlOperator,
    b: *const SlOperator,
    out: *mut *mut SlOperator,
) -> SlStatus {
    guard(|| {
        let a = get(a, "a")?;
        let op = match (&a.op, &get(b, "b")?.op) {
            (Op::Concrete(x), Op::Concrete(y)) => Op::Concrete(x.compose(y)),
            (Op::Symbolic(x), Op::Symbolic(y)) => Op::Symbolic(x.compose(y)),
            _ => return Err(mismatch()),
        };
        put(out, a.with(op), "out")
    })
}

fn as_function<S: Model>(f: &SuperDiffOp<S>) -> Res<S> {
    if f.effective_order().unwrap_or(0) > 0 {
        return Err(Error::DimensionMismatch(format!("expected a function, got an operator of order {}", f.order())).into());
    }
    Ok(f.power_coeff(0))
}

/// Applies `op` to the function `f` (an operator of order 0).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_operator_apply(
    op: *const SlOperator,
    f: *const SlOperator,
    out: *mut *mut SlOperator,
) -> SlStatus {
    guard(|| {
        let o = get(op, "operator")?;
        let r = match (&o.op, &get(f, "function")?.op) {
            (Op::Concrete(x), Op::Concrete(y)) => {
                Op::Concrete(SuperDiffOp::scalar(x.apply(&as_function(y)?)))
            }
            (Op::Symbolic(x), Op::Symbolic(y)) => {
                Op::Symbolic(SuperDiffOp::scalar(x.apply(&as_function(y)?)))
            }
            _ => return Err(mismatch()),
        };
        put(out, o.with(r), "out")
    })
}

/// Division with remainder by an operator with invertible top coefficient.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_operator_divide(
    n: *const SlOperator,
    m: *const SlOperator,
    side: SlSide,
    quotient: *mut *mut SlOperator,
    remainder: *mut *mut SlOperator,
) -> SlStatus {
    guard(|| {
        let n = get(n, "dividend")?;
        let (q, r) = match (&n.op, &get(m, "divisor")?.op) {
            (Op::Concrete(x), Op::Concrete(y)) => {
                let (q, r) = match side {
                    SlSide::Right => divide_right(x, y)?,
                    SlSide::Left => divide_left(x, y)?,
                };
                (Op::Concrete(q), Op::Concrete(r))
            }
            (Op::Symbolic(x), Op::Symbolic(y)) => {
                let (q, r) = match side {
                    SlSide::Right => divide_right(x, y)?,
                    SlSide::Left => divide_left(x, y)?,
                };
                (Op::Symbolic(q), Op::Symbolic(r))
            }
            _ => return Err(mismatch()),
        };
        if quotient.is_null() || remainder.is_null() {
            return Err(null("output"));
        }
        put(quotient, n.with(q), "quotient")?;
        put(remainder, n.with(r), "remainder")
    })
}

/// An empty list.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_list_new(out: *mut *mut SlOperatorList) -> SlStatus {
    guard(|| put(out, SlOperatorList::default(), "out"))
}

/// Appends a copy of `op`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_list_push(list: *mut SlOperatorList, op: *const SlOperator) -> SlStatus {
    guard(|| {
        let item = get(op, "operator")?.clone();
        list.as_mut().ok_or_else(|| null("list"))?.items.push(item);
        Ok(())
    })
}

/// Number of elements; 0 for null.
///
/// # Safety
/// `list` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn sl_list_len(list: *const SlOperatorList) -> usize {
    list.as_ref().map_or(0, |l| l.items.len())
}

/// A copy of element `index`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_list_get(
    list: *const SlOperatorList,
    index: usize,
    out: *mut *mut SlOperator,
) -> SlStatus {
    guard(|| {
        let l = get(list, "list")?;
        let item = l.items.get(index).ok_or_else(|| {
            Error::DimensionMismatch(format!("index {index} in a list of {}", l.items.len()))
        })?;
        put(out, item.clone(), "out")
    })
}

/// # Safety
/// `list` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_list_free(list: *mut SlOperatorList) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

fn functions<S: Model>(items: &[SlOperator], pick: impl Fn(&Op) -> Option<&SuperDiffOp<S>>) -> Res<Vec<S>> {
    items
        .iter()
        .map(|i| pick(&i.op).ok_or_else(mismatch).and_then(as_function))
        .collect()
}

fn concrete_op(o: &Op) -> Option<&SuperDiffOp<SuperFunction>> {
    match o {
        Op::Concrete(x) => Some(x),
        Op::Symbolic(_) => None,
    }
}

fn symbolic_op(o: &Op) -> Option<&SuperDiffOp<SymbolicScalar>> {
    match o {
        Op::Symbolic(x) => Some(x),
        Op::Concrete(_) => None,
    }
}

/// Kernel basis of a non-degenerate operator as series known through
/// `x^trunc` (0: the session's order). Concrete model only.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_kernel_basis(
    op: *const SlOperator,
    trunc: usize,
    out: *mut *mut SlOperatorList,
) -> SlStatus {
    guard(|| {
        let o = get(op, "operator")?;
        let t = if trunc == 0 { o.cfg.truncation } else { Truncation(trunc) };
        let items = kernel_basis(o.concrete()?, t)?
            .into_iter()
            .map(|f| o.with(Op::Concrete(SuperDiffOp::scalar(f))))
            .collect();
        put(out, SlOperatorList { items }, "out")
    })
}

/// The monic operator whose kernel is spanned by the functions of `basis`
/// (of alternating parity, even first).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_reconstruct(
    basis: *const SlOperatorList,
    out: *mut *mut SlOperator,
) -> SlStatus {
    guard(|| {
        let b = get(basis, "basis")?;
        let first = b.items.first().ok_or_else(|| Error::DimensionMismatch("empty basis".into()))?;
        let op = match first.op {
            Op::Concrete(_) => Op::Concrete(reconstruct_operator(&functions(&b.items, concrete_op)?)?),
            Op::Symbolic(_) => Op::Symbolic(reconstruct_operator(&functions(&b.items, symbolic_op)?)?),
        };
        put(out, first.with(op), "out")
    })
}

/// Elementary Darboux transformation of `l0` on the even eigenfunction
/// `phi`: `M = D − Dφ·φ⁻¹` and `L₁` with `M∘L₀ = L₁∘M`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_darboux_elementary(
    l0: *const SlOperator,
    phi: *const SlOperator,
    m_out: *mut *mut SlOperator,
    l1_out: *mut *mut SlOperator,
) -> SlStatus {
    guard(|| {
        let l = get(l0, "l0")?;
        let (m, l1) = match (&l.op, &get(phi, "phi")?.op) {
            (Op::Concrete(x), Op::Concrete(y)) => {
                let dt = elementary_dt(x, &as_function(y)?, None)?;
                (Op::Concrete(dt.m), Op::Concrete(dt.l1))
            }
            (Op::Symbolic(x), Op::Symbolic(y)) => {
                let dt = elementary_dt(x, &as_function(y)?, None)?;
                (Op::Symbolic(dt.m), Op::Symbolic(dt.l1))
            }
            _ => return Err(mismatch()),
        };
        if m_out.is_null() || l1_out.is_null() {
            return Err(null("output"));
        }
        put(m_out, l.with(m), "m")?;
        put(l1_out, l.with(l1), "l1")
    })
}

/// Darboux transformation along an invariant flag: the composed `M` and
/// the final operator `L_r`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_darboux_factorize(
    l0: *const SlOperator,
    flag: *const SlOperatorList,
    m_out: *mut *mut SlOperator,
    lr_out: *mut *mut SlOperator,
) -> SlStatus {
    guard(|| {
        let l = get(l0, "l0")?;
        let items = &get(flag, "flag")?.items;
        let (m, lr) = match &l.op {
            Op::Concrete(x) => {
                let c = factorize_dt(x, &functions(items, concrete_op)?)?;
                (Op::Concrete(c.composed.clone()), Op::Concrete(c.lr().clone()))
            }
            Op::Symbolic(x) => {
                let c = factorize_dt(x, &functions(items, symbolic_op)?)?;
                (Op::Symbolic(c.composed.clone()), Op::Symbolic(c.lr().clone()))
            }
        };
        if m_out.is_null() || lr_out.is_null() {
            return Err(null("output"));
        }
        put(m_out, l.with(m), "m")?;
        put(lr_out, l.with(lr), "lr")
    })
}

/// Parses a matrix in the text format, e.g.
/// `"format rows=+- cols=+-\n[[1 + x, xi], [xi, 1]]"`, optionally with a
/// `wrong row i` / `wrong col j` line.
///
/// # Safety
/// Pointers must be valid; `src` must be a C string.
#[no_mangle]
pub unsafe extern "C" fn sl_matrix_parse(
    session: *const SlSession,
    src: *const c_char,
    out: *mut *mut SlMatrix,
) -> SlStatus {
    guard(|| {
        let s = get(session, "session")?;
        let doc = parse_document(text(src, "source")?)?;
        body_only(&doc)?;
        let item = match doc.items.as_slice() {
            [item @ Item::Matrix { .. }] => item,
            _ => return Err(Failure::Status(SlStatus::Parse, "expected exactly one matrix".into())),
        };
        let ctx = Ctx::new(&s.cfg);
        let mat = match s.cfg.model {
            ModelName::Concrete => Mat::Concrete(ctx.matrix(item)?),
            ModelName::Symbolic => Mat::Symbolic(ctx.matrix(item)?),
        };
        put(out, SlMatrix { cfg: s.cfg.clone(), mat }, "out")
    })
}

/// # Safety
/// `m` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_matrix_free(m: *mut SlMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// `Ber A`, or `Ber* A` when `star` is non-zero, as a function.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_ber(m: *const SlMatrix, star: c_int, out: *mut *mut SlOperator) -> SlStatus {
    guard(|| {
        let a = get(m, "matrix")?;
        let op = match &a.mat {
            Mat::Concrete(x) => Op::Concrete(SuperDiffOp::scalar(if star != 0 { ber_star(x)? } else { ber(x)? })),
            Mat::Symbolic(x) => Op::Symbolic(SuperDiffOp::scalar(if star != 0 { ber_star(x)? } else { ber(x)? })),
        };
        put(out, SlOperator { cfg: a.cfg.clone(), op }, "out")
    })
}

/// Runs the command-line tool in-process: `argv` holds `argc` arguments
/// after the program name, `input` is the document read from standard
/// input (null for none). Both outputs and the exit code are written even
/// when the command fails; the status reports only interface failures.
///
/// # Safety
/// `argv` must hold `argc` valid C strings; outputs must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_run(
    argc: usize,
    argv: *const *const c_char,
    input: *const c_char,
    stdout_out: *mut *mut c_char,
    stderr_out: *mut *mut c_char,
    exit_code: *mut c_int,
) -> SlStatus {
    guard(|| {
        if argc > 0 && argv.is_null() {
            return Err(null("argv"));
        }
        let mut args = vec!["superline".to_string()];
        for i in 0..argc {
            args.push(text(*argv.add(i), "argument")?.to_string());
        }
        let input = if input.is_null() { "" } else { text(input, "input")? };
        if stdout_out.is_null() || stderr_out.is_null() || exit_code.is_null() {
            return Err(null("output"));
        }
        let o = superline::cli::run(args, &mut input.as_bytes());
        put_string(stdout_out, o.stdout)?;
        put_string(stderr_out, o.stderr)?;
        *exit_code = o.code;
        Ok(())
    })
}
