//! JSON input and output.
//!
//! Tensors are read from `{"order", "dim", "data"}` objects, bare numbers
//! (order 0), flat arrays (vectors) or nested arrays of equal lengths
//! (matrices and higher orders). They are always written in the object
//! form. Numbers are written with 17 significant digits, which round-trips
//! every `f64`; non-finite values become `null`.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::tensor::{Matrix, Partition, Tensor};

/// Parses JSON text, reporting failures with a byte offset.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        offset: byte_offset(text, e.line(), e.column()),
        message: e.to_string(),
    })
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let line_start: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    (line_start + column.saturating_sub(1)).min(text.len())
}

/// Reads a command-line value that is either inline JSON or a path to a
/// JSON file. Text starting with `{`, `[`, a digit, `-` or `.` is inline.
pub fn read_json_arg(arg: &str) -> Result<Value> {
    let trimmed = arg.trim_start();
    let inline = trimmed
        .chars()
        .next()
        .is_some_and(|c| c == '{' || c == '[' || c == '-' || c == '.' || c.is_ascii_digit());
    if inline || !Path::new(arg).exists() {
        return parse_json(arg);
    }
    let text = std::fs::read_to_string(arg).map_err(|source| Error::Io {
        path: arg.to_string(),
        source,
    })?;
    parse_json(&text)
}

fn describe(v: &Value) -> String {
    match v {
        Value::Null => "null".into(),
        Value::Bool(_) => "a boolean".into(),
        Value::Number(_) => "a number".into(),
        Value::String(_) => "a string".into(),
        Value::Array(a) => format!("an array of length {}", a.len()),
        Value::Object(_) => "an object".into(),
    }
}

fn number(v: &Value, context: &'static str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::shape(context, "a number", describe(v)))
}

fn count(v: &Value, field: &'static str, context: &'static str) -> Result<usize> {
    v.get(field)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| Error::shape(context, format!("a non-negative integer field \"{field}\""), describe(v)))
}

pub fn tensor_from_json(v: &Value) -> Result<Tensor> {
    const CTX: &str = "tensor JSON";
    match v {
        Value::Object(_) => {
            let order = count(v, "order", CTX)?;
            let dim = count(v, "dim", CTX)?;
            let data = v
                .get("data")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::shape(CTX, "an array field \"data\"", describe(v)))?
                .iter()
                .map(|x| number(x, CTX))
                .collect::<Result<Vec<_>>>()?;
            Tensor::from_data(order, dim, data)
        }
        Value::Number(_) => Ok(Tensor::scalar(number(v, CTX)?, 1)),
        Value::Array(_) => {
            let mut order = 0;
            let mut cursor = v;
            while let Value::Array(items) = cursor {
                order += 1;
                match items.first() {
                    Some(first) => cursor = first,
                    None => return Err(Error::shape(CTX, "non-empty arrays", "an empty array")),
                }
            }
            let dim = v.as_array().map_or(0, Vec::len);
            let mut data = Vec::with_capacity(dim.pow(order as u32));
            flatten(v, order, dim, &mut data)?;
            Tensor::from_data(order, dim, data)
        }
        _ => Err(Error::shape(CTX, "an object, number or array", describe(v))),
    }
}

fn flatten(v: &Value, depth: usize, dim: usize, out: &mut Vec<f64>) -> Result<()> {
    if depth == 0 {
        out.push(number(v, "tensor JSON")?);
        return Ok(());
    }
    match v.as_array() {
        Some(items) if items.len() == dim => items.iter().try_for_each(|x| flatten(x, depth - 1, dim, out)),
        _ => Err(Error::shape(
            "tensor JSON",
            format!("nested arrays of length {dim} at every level"),
            describe(v),
        )),
    }
}

pub fn matrix_from_json(v: &Value) -> Result<Matrix> {
    let m = tensor_from_json(v)?;
    m.check_matrix("matrix JSON")?;
    Ok(m)
}

/// A list of matrices: a JSON array whose items are matrices, or an object
/// with a `"matrices"` array.
pub fn matrices_from_json(v: &Value) -> Result<Vec<Matrix>> {
    let items = v
        .get("matrices")
        .unwrap_or(v)
        .as_array()
        .ok_or_else(|| Error::shape("matrix list JSON", "an array of matrices", describe(v)))?;
    items.iter().map(matrix_from_json).collect()
}

/// A cycle-notation string or `{"k": 3, "map": [2, 3, 1]}` (1-based).
pub fn permutation_from_json(v: &Value, k: Option<usize>) -> Result<Permutation> {
    if let Some(s) = v.as_str() {
        return Permutation::parse(s, k);
    }
    let map = v
        .get("map")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::shape("permutation JSON", "{\"k\": .., \"map\": [..]}", describe(v)))?
        .iter()
        .map(|x| x.as_u64().map(|x| x as usize))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InvalidPermutation("map entries must be positive integers".into()))?;
    let declared = count(v, "k", "permutation JSON")?;
    if declared != map.len() {
        return Err(Error::InvalidPermutation(format!(
            "k = {declared} but map has {} entries",
            map.len()
        )));
    }
    Permutation::from_one_based(&map)
}

/// A permutation given on the command line: cycle notation, inline JSON or
/// a path to a JSON file.
pub fn permutation_arg(arg: &str, k: Option<usize>) -> Result<Permutation> {
    let t = arg.trim_start();
    if t.starts_with('(') || t.eq_ignore_ascii_case("id") {
        return Permutation::parse(arg, k);
    }
    permutation_from_json(&read_json_arg(arg)?, k)
}

pub fn permutation_to_json(p: &Permutation) -> Value {
    json!({"k": p.k(), "map": p.one_based(), "cycles": p.to_string()})
}

/// `{"n": 4, "blocks": [[1, 2], [3], [4]]}` (1-based).
pub fn partition_from_json(v: &Value) -> Result<Partition> {
    let n = count(v, "n", "partition JSON")?;
    let blocks = v
        .get("blocks")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidPartition("expected a \"blocks\" array".into()))?
        .iter()
        .map(|b| {
            b.as_array()
                .and_then(|items| items.iter().map(|x| x.as_u64().map(|x| x as usize)).collect::<Option<Vec<_>>>())
                .ok_or_else(|| Error::InvalidPartition("blocks must be arrays of positive integers".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Partition::from_one_based_blocks(n, &blocks)
}

pub fn partition_to_json(p: &Partition) -> Value {
    let blocks: Vec<Vec<usize>> = p.blocks().iter().map(|b| b.iter().map(|i| i + 1).collect()).collect();
    json!({"n": p.n(), "blocks": blocks})
}

/// Canonical object form of a tensor.
#[derive(Serialize)]
struct TensorJson<'a> {
    order: usize,
    dim: usize,
    data: &'a [f64],
}

pub fn tensor_to_json(t: &Tensor) -> Value {
    serde_json::to_value(TensorJson {
        order: t.order(),
        dim: t.dim(),
        data: t.data(),
    })
    .expect("tensor serialises")
}

/// Writes floats as `{:.16e}` (17 significant digits).
#[derive(Debug, Clone, Copy, Default)]
pub struct Sig17;

impl Formatter for Sig17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serialises with the 17-digit float format, followed by a newline.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17);
    value.serialize(&mut ser).expect("serialising to memory cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}
