#ifndef SUPERLINE_H
#define SUPERLINE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Which side the divisor stands on.
typedef enum SlSide {
  // `N = Q∘M + R`
  SL_SIDE_RIGHT = 0,
  // `N = M∘Q + R`
  SL_SIDE_LEFT = 1,
} SlSide;

// Outcome of a call. Values other than `Ok` name the failure; the
// mathematical ones correspond one to one to the library's error kinds.
typedef enum SlStatus {
  SL_STATUS_OK = 0,
  SL_STATUS_NULL_ARGUMENT,
  SL_STATUS_INVALID_UTF8,
  SL_STATUS_PANIC,
  SL_STATUS_PARSE,
  SL_STATUS_UNDECLARED_SYMBOL,
  SL_STATUS_PARITY_CONFLICT,
  SL_STATUS_MODEL_MISMATCH,
  SL_STATUS_NOT_INVERTIBLE,
  SL_STATUS_TRUNCATION_EXCEEDED,
  SL_STATUS_NOT_CONSTANT,
  SL_STATUS_DEGENERATE_DIVISOR,
  SL_STATUS_DEGENERATE_OPERATOR,
  SL_STATUS_NOT_A_KERNEL_ELEMENT,
  SL_STATUS_BER_UNDEFINED,
  SL_STATUS_BER_STAR_UNDEFINED,
  SL_STATUS_ILLEGAL_WRONGNESS,
  SL_STATUS_COFACTOR_UNDEFINED,
  SL_STATUS_PARITY_MISMATCH,
  SL_STATUS_DIMENSION_MISMATCH,
  SL_STATUS_SINGULAR_MATRIX,
  SL_STATUS_KERNEL_NOT_IN_GENERAL_POSITION,
  SL_STATUS_INFINITE_DIMENSIONAL_KERNEL,
  SL_STATUS_REMAINDER_NOT_CONSTANT,
  SL_STATUS_NOT_INVARIANT_FLAG,
  SL_STATUS_FLAG_NOT_IN_GENERAL_POSITION,
} SlStatus;

// An even (or wrong) matrix with a parity format.
typedef struct SlMatrix SlMatrix;

// An operator, or a function when its order is 0.
typedef struct SlOperator SlOperator;

// A growable list of operators (kernel bases, flags).
typedef struct SlOperatorList SlOperatorList;

// Declarations, model and truncation order.
typedef struct SlSession SlSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string.
const char *sl_version(void);

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next call into the library on this thread.
const char *sl_last_error(void);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void sl_string_free(char *s);

// Creates a session from declaration lines such as
// `"declare odd a1\ndeclare even a2"` (null or empty for none). The model
// is inferred from the declarations unless the text has a `model` line.
// `trunc` is the highest power of x kept; 0 selects the default.
//
// # Safety
// `declarations` must be null or a valid C string; `out` must be valid.
enum SlStatus sl_session_new(const char *declarations, size_t trunc, struct SlSession **out);

// Non-zero when the session uses the symbolic model.
//
// # Safety
// `session` must be a valid handle.
int sl_session_is_symbolic(const struct SlSession *session);

// # Safety
// `session` must be null or a handle not yet freed.
void sl_session_free(struct SlSession *session);

// Parses and evaluates an operator or function, e.g. `"D^2 + x*D"`.
//
// # Safety
// Pointers must be valid; `src` must be a C string.
enum SlStatus sl_operator_parse(const struct SlSession *session,
                                const char *src,
                                struct SlOperator **out);

// Copies an operator handle.
//
// # Safety
// Pointers must be valid.
enum SlStatus sl_operator_clone(const struct SlOperator *op, struct SlOperator **out);

// # Safety
// `op` must be null or a handle not yet freed.
void sl_operator_free(struct SlOperator *op);

// Canonical text of an operator.
//
// # Safety
// Pointers must be valid.
enum SlStatus sl_operator_to_string(const struct SlOperator *op, char **out);

// Order of the highest non-zero coefficient; 0 for functions and for 0.
//
// # Safety
// Pointers must be valid.
enum SlStatus sl_operator_order(const struct SlOperator *op, size_t *out);

// Writes 1 to `out` when the operators are equal (series compared where
// both are known), else 0.
//
// # Safety
// Pointers must be valid.
enum SlStatus sl_operator_equal(const struct SlOperator *a, const struct SlOperator *b, int *out);

// `a∘b`.
//
// # Safety
// Pointers must be valid.
enum SlStatus sl_operator_compose(const struct SlOperator *a,
                                  const struct SlOperator *b,
                                  struct SlOperator **out);

// Applies `op` to the function `f` (an operator of order 0).
//
// # Safety
// Pointers must be valid.
enum SlStatus sl_operator_apply(const struct SlOperator *op,
                                const struct SlOperator *f,
                                struct SlOperator **out);

// Division with remainder by an operator with invertible top coefficient.
//
// # Safety
// Pointers must be valid.
enum SlStatus sl_operator_divide(const struct SlOperator *n,
                                 const struct SlOperator *m,
                                 enum SlSide side,
                                 struct SlOperator **quotient,
                                 struct SlOperator **remainder);

// An empty list.
//
// # Safety
// `out` must be valid.
enum SlStatus sl_list_new(struct SlOperatorList **out);

// Appends a copy of `op`.
//
// # Safety
// Pointers must be valid.
enum SlStatus sl_list_push(struct SlOperatorList *list, const struct SlOperator *op);

// Number of elements; 0 for null.
//
// # Safety
// `list` must be null or valid.
size_t sl_list_len(const struct SlOperatorList *list);

// A copy of element `index`.
//
// # Safety
// Pointers must be valid.
enum SlStatus sl_list_get(const struct SlOperatorList *list, size_t index, struct SlOperator **out);

// # Safety
// `list` must be null or a handle not yet freed.
void sl_list_free(struct SlOperatorList *list);

// Kernel basis of a non-degenerate operator as series known through
// `x^trunc` (0: the session's order). Concrete model only.
//
// # Safety
// Pointers must be valid.
enum SlStatus sl_kernel_basis(const struct SlOperator *op,
                              size_t trunc,
                              struct SlOperatorList **out);

// The monic operator whose kernel is spanned by the functions of `basis`
// (of alternating parity, even first).
//
// # Safety
// Pointers must be valid.
enum SlStatus sl_reconstruct(const struct SlOperatorList *basis, struct SlOperator **out);

// Elementary Darboux transformation of `l0` on the even eigenfunction
// `phi`: `M = D − Dφ·φ⁻¹` and `L₁` with `M∘L₀ = L₁∘M`.
//
// # Safety
// Pointers must be valid.
enum SlStatus sl_darboux_elementary(const struct SlOperator *l0,
                                    const struct SlOperator *phi,
                                    struct SlOperator **m_out,
                                    struct SlOperator **l1_out);

// Darboux transformation along an invariant flag: the composed `M` and
// the final operator `L_r`.
//
// # Safety
// Pointers must be valid.
enum SlStatus sl_darboux_factorize(const struct SlOperator *l0,
                                   const struct SlOperatorList *flag,
                                   struct SlOperator **m_out,
                                   struct SlOperator **lr_out);

// Parses a matrix in the text format, e.g.
// `"format rows=+- cols=+-\n[[1 + x, xi], [xi, 1]]"`, optionally with a
// `wrong row i` / `wrong col j` line.
//
// # Safety
// Pointers must be valid; `src` must be a C string.
enum SlStatus sl_matrix_parse(const struct SlSession *session,
                              const char *src,
                              struct SlMatrix **out);

// # Safety
// `m` must be null or a handle not yet freed.
void sl_matrix_free(struct SlMatrix *m);

// `Ber A`, or `Ber* A` when `star` is non-zero, as a function.
//
// # Safety
// Pointers must be valid.
enum SlStatus sl_ber(const struct SlMatrix *m, int star, struct SlOperator **out);

// Runs the command-line tool in-process: `argv` holds `argc` arguments
// after the program name, `input` is the document read from standard
// input (null for none). Both outputs and the exit code are written even
// when the command fails; the status reports only interface failures.
//
// # Safety
// `argv` must hold `argc` valid C strings; outputs must be valid.
enum SlStatus sl_run(size_t argc,
                     const char *const *argv,
                     const char *input,
                     char **stdout_out,
                     char **stderr_out,
                     int *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUPERLINE_H */
