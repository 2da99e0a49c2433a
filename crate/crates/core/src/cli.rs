//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::diagop::diag_sigma;
use crate::error::{Error, Result, EXIT_VERIFICATION_FAILED};
use crate::hadamard::{hadamard_sigma, inner_hadamard};
use crate::io::{
    matrices_from_json, matrix_from_json, partition_from_json, permutation_arg, read_json_arg, tensor_from_json,
    tensor_to_json, to_json_string,
};
use crate::spectral::{eig_sym_ordered, grad_spectral, hess_spectral_apply, hess_spectral_tensor, SymmetricFunction};
use crate::tensor::{conjugate, project, project_block, Matrix, Tensor};
use crate::verify::{self, Suite, VerifyConfig, DEFAULT_TRIALS};

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  2  usage error, capacity guard exceeded, unreadable file
  3  malformed JSON (with byte offset), invalid permutation or partition
  4  shape mismatch, permutation size mismatch, non-orthogonal U,
     non-symmetric matrix, function outside its domain
  5  repeated eigenvalues (degenerate spectrum)
  6  eigensolver did not converge
  7  verification failure (report has cases_failed > 0)

JSON arguments may be given inline or as a path to a file. Permutations are
cycle notation such as \"(12)(3)\" or {\"k\": 3, \"map\": [2, 3, 1]} (1-based).
Set SIGMA_TENSOR_THREADS to cap the worker threads of `verify`.";

#[derive(Debug, Parser)]
#[command(name = "sigma-tensor", version, about = "Generalised Hadamard products, Diag-sigma, tensor conjugation and spectral derivatives", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Write the JSON result to this file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SpectralArgs {
    /// trace, fro2, logbarrier, esym2, separable:exp or separable:square
    #[arg(long = "f")]
    function: String,
    /// Symmetric matrix X
    #[arg(long)]
    matrix: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sigma-Hadamard product of k matrices
    Hadamard {
        #[arg(long)]
        sigma: String,
        /// JSON array of k matrices
        #[arg(long)]
        matrices: String,
        #[command(flatten)]
        out: Output,
    },
    /// <T, H_1 o_sigma ... o_sigma H_k>
    Inner {
        #[arg(long)]
        tensor: String,
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        matrices: String,
        #[command(flatten)]
        out: Output,
    },
    /// Lift a k-tensor to the 2k-tensor Diag^sigma T
    DiagSigma {
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        tensor: String,
        #[command(flatten)]
        out: Output,
    },
    /// U T U^T (every mode multiplied by U)
    Conjugate {
        #[arg(long = "u")]
        u: String,
        #[arg(long)]
        tensor: String,
        #[command(flatten)]
        out: Output,
    },
    /// Generalised-diagonal projection, blockwise when --partition is given
    Project {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        tensor: String,
        /// {"n": .., "blocks": [[..], ..]} (1-based)
        #[arg(long)]
        partition: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Whether every cycle of sigma lies inside a cycle of mu
    Precedes {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        sigma: String,
        /// Domain size (defaults to the largest point mentioned)
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Gradient of f(lambda(X))
    Grad {
        #[command(flatten)]
        spectral: SpectralArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Hessian of f(lambda(X)) applied to [E1, E2]
    Hess {
        #[command(flatten)]
        spectral: SpectralArgs,
        #[arg(long)]
        e1: String,
        #[arg(long)]
        e2: String,
        #[command(flatten)]
        out: Output,
    },
    /// Hessian of f(lambda(X)) as a 4-tensor
    HessTensor {
        #[command(flatten)]
        spectral: SpectralArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Ordered spectral decomposition X = V Diag(lambda) V^T
    Eig {
        #[arg(long)]
        matrix: String,
        #[command(flatten)]
        out: Output,
    },
    /// Run a verification suite and print its report
    Verify {
        /// transfer, transfer-block, dual, norm, assoc, perm-commute,
        /// contract, corollary32, grad, hess or all
        suite: String,
        /// Tensor order (ignored by `all`, which uses per-suite sizes)
        #[arg(long)]
        k: Option<usize>,
        /// Dimension (ignored by `all`)
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include elapsed_ms in the report
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        out: Output,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit status. Results go to `stdout` (or `--out`), messages to
/// `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(out: &Output, value: &Value, stdout: &mut dyn Write) -> Result<()> {
    let text = to_json_string(value);
    match &out.out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        }),
        None => stdout.write_all(text.as_bytes()).map_err(|source| Error::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn tensor_arg(arg: &str) -> Result<Tensor> {
    tensor_from_json(&read_json_arg(arg)?)
}

fn matrix_arg(arg: &str) -> Result<Matrix> {
    matrix_from_json(&read_json_arg(arg)?)
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Hadamard { sigma, matrices, out } => {
            let hs = matrices_from_json(&read_json_arg(&matrices)?)?;
            let sigma = permutation_arg(&sigma, Some(hs.len()))?;
            let refs: Vec<&Matrix> = hs.iter().collect();
            emit(&out, &tensor_to_json(&hadamard_sigma(&sigma, &refs)?), stdout)?;
        }
        Command::Inner {
            tensor,
            sigma,
            matrices,
            out,
        } => {
            let t = tensor_arg(&tensor)?;
            let sigma = permutation_arg(&sigma, Some(t.order()))?;
            let hs = matrices_from_json(&read_json_arg(&matrices)?)?;
            let refs: Vec<&Matrix> = hs.iter().collect();
            emit(&out, &json!({ "value": inner_hadamard(&t, &sigma, &refs)? }), stdout)?;
        }
        Command::DiagSigma { sigma, tensor, out } => {
            let t = tensor_arg(&tensor)?;
            let sigma = permutation_arg(&sigma, Some(t.order()))?;
            emit(&out, &tensor_to_json(&diag_sigma(&sigma, &t)?), stdout)?;
        }
        Command::Conjugate { u, tensor, out } => {
            let u = matrix_arg(&u)?;
            let t = tensor_arg(&tensor)?;
            emit(&out, &tensor_to_json(&conjugate(&u, &t)?), stdout)?;
        }
        Command::Project {
            mu,
            tensor,
            partition,
            out,
        } => {
            let t = tensor_arg(&tensor)?;
            let mu = permutation_arg(&mu, Some(t.order()))?;
            let projected = match partition {
                Some(p) => project_block(&mu, &partition_from_json(&read_json_arg(&p)?)?, &t)?,
                None => project(&mu, &t)?,
            };
            emit(&out, &tensor_to_json(&projected), stdout)?;
        }
        Command::Precedes { mu, sigma, k, out } => {
            let k = match k {
                Some(k) => k,
                None => permutation_arg(&mu, None)?.k().max(permutation_arg(&sigma, None)?.k()),
            };
            let mu = permutation_arg(&mu, Some(k))?;
            let sigma = permutation_arg(&sigma, Some(k))?;
            emit(&out, &json!({ "precedes": mu.precedes(&sigma)? }), stdout)?;
        }
        Command::Grad { spectral, out } => {
            let (f, x) = spectral_inputs(&spectral)?;
            emit(&out, &tensor_to_json(&grad_spectral(&f, &x)?), stdout)?;
        }
        Command::Hess { spectral, e1, e2, out } => {
            let (f, x) = spectral_inputs(&spectral)?;
            let value = hess_spectral_apply(&f, &x, &matrix_arg(&e1)?, &matrix_arg(&e2)?)?;
            emit(&out, &json!({ "value": value }), stdout)?;
        }
        Command::HessTensor { spectral, out } => {
            let (f, x) = spectral_inputs(&spectral)?;
            emit(&out, &tensor_to_json(&hess_spectral_tensor(&f, &x)?), stdout)?;
        }
        Command::Eig { matrix, out } => {
            let d = eig_sym_ordered(&matrix_arg(&matrix)?)?;
            emit(&out, &json!({ "lambda": d.lambda, "v": tensor_to_json(&d.v) }), stdout)?;
        }
        Command::Verify {
            suite,
            k,
            n,
            trials,
            seed,
            timing,
            out,
        } => {
            let suite = Suite::from_name(&suite)?;
            let cfg = VerifyConfig {
                timing,
                ..VerifyConfig::new(
                    k.unwrap_or(suite.default_k()),
                    n.unwrap_or(suite.default_n()),
                    trials,
                    seed,
                )
            };
            let report = verify::with_thread_cap(|| verify::run(suite, &cfg))??;
            let value = serde_json::to_value(&report).expect("report serialises");
            emit(&out, &value, stdout)?;
            if !report.passed() {
                return Ok(EXIT_VERIFICATION_FAILED);
            }
        }
    }
    Ok(0)
}

fn spectral_inputs(args: &SpectralArgs) -> Result<(SymmetricFunction, Matrix)> {
    Ok((SymmetricFunction::from_name(&args.function)?, matrix_arg(&args.matrix)?))
}
