use core::fmt;

/// Errors raised by the exact-arithmetic and combinatorial routines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Operands do not have compatible shapes.
    DimensionMismatch { expected: usize, found: usize },
    /// A dimension exceeds what the routine supports.
    DimensionTooLarge { n: usize, max: usize },
    /// Gaussian elimination found a rank-deficient system.
    SingularMatrix,
    NotSquare { rows: usize, cols: usize },
    NotBistochastic,
    /// The permutation is not contained in the skeleton of the matrix.
    NotInnerPermutation,
    /// The skeleton does not have total support.
    NotAdmissible,
    /// The matrix does not have a common diagonal sum over its inner permutations.
    NotRcds,
    /// A propagated `u_i + v_j` value disagrees with the matrix at `(row, col)`.
    Inconsistent { row: usize, col: usize },
    InvalidPermutation,
    /// `0 < s < r < n` violated.
    InvalidTriple { r: usize, s: usize, n: usize },
    InvalidSpec(&'static str),
    EmptyReport,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::DimensionTooLarge { n, max } => {
                write!(f, "dimension {n} exceeds the supported maximum {max}")
            }
            Error::SingularMatrix => f.write_str("matrix is singular"),
            Error::NotSquare { rows, cols } => write!(f, "matrix is {rows}x{cols}, not square"),
            Error::NotBistochastic => f.write_str("matrix is not bistochastic"),
            Error::NotInnerPermutation => {
                f.write_str("permutation is not contained in the skeleton")
            }
            Error::NotAdmissible => f.write_str("skeleton does not have total support"),
            Error::NotRcds => f.write_str("inner diagonal sums are not all equal"),
            Error::Inconsistent { row, col } => {
                write!(f, "u/v propagation inconsistent at entry ({row}, {col})")
            }
            Error::InvalidPermutation => f.write_str("image is not a bijection"),
            Error::InvalidTriple { r, s, n } => {
                write!(f, "invalid triple (r, s, n) = ({r}, {s}, {n}): need 0 < s < r < n")
            }
            Error::InvalidSpec(why) => write!(f, "invalid family spec: {why}"),
            Error::EmptyReport => f.write_str("report contains no records"),
        }
    }
}

impl core::error::Error for Error {}
