use std::fmt::Write as _;
use std::path::Path;

use super::SynthesisError;
use crate::fmt::shortest;
use crate::tridiag::TridiagonalMatrix;

/// MatrixMarket coordinate text (1-based, exact zeros omitted).
pub fn to_matrix_market(t: &TridiagonalMatrix) -> String {
    let n = t.n();
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i.saturating_sub(1)..(i + 2).min(n) {
            let v = t.get(i, j);
            if v != 0.0 {
                entries.push((i + 1, j + 1, v));
            }
        }
    }
    let mut out = String::from("%%MatrixMarket matrix coordinate real general\n");
    let _ = writeln!(out, "{n} {n} {}", entries.len());
    for (i, j, v) in entries {
        let _ = writeln!(out, "{i} {j} {}", shortest(v));
    }
    out
}

pub fn from_matrix_market(text: &str) -> Result<TridiagonalMatrix, SynthesisError> {
    let bad = |msg: &str| SynthesisError::MatrixMarket(msg.to_string());
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| bad("empty input"))?;
    if !header.starts_with("%%MatrixMarket matrix coordinate real general") {
        return Err(bad("unsupported header"));
    }
    let mut lines = lines.filter(|l| !l.starts_with('%'));
    let size = lines.next().ok_or_else(|| bad("missing size line"))?;
    let dims: Vec<usize> = size.split_whitespace().map(str::parse).collect::<Result<_, _>>().map_err(|_| bad("bad size line"))?;
    let [rows, cols, nnz] = dims[..] else { return Err(bad("size line needs three integers")) };
    if rows != cols || rows == 0 {
        return Err(bad("matrix must be square and non-empty"));
    }
    let n = rows;
    let mut diag = vec![0.0; n];
    let mut sub = vec![0.0; n - 1];
    let mut sup = vec![0.0; n - 1];
    let mut count = 0;
    for line in lines {
        let mut it = line.split_whitespace();
        let (Some(i), Some(j), Some(v), None) = (it.next(), it.next(), it.next(), it.next()) else {
            return Err(bad(&format!("malformed entry '{line}'")));
        };
        let i: usize = i.parse().map_err(|_| bad("bad row index"))?;
        let j: usize = j.parse().map_err(|_| bad("bad column index"))?;
        let v: f64 = v.parse().map_err(|_| bad("bad value"))?;
        if i == 0 || j == 0 || i > n || j > n {
            return Err(bad("index out of range"));
        }
        let (i, j) = (i - 1, j - 1);
        match j as isize - i as isize {
            0 => diag[i] = v,
            1 => sup[i] = v,
            -1 => sub[j] = v,
            _ => return Err(bad("entry outside the tridiagonal band")),
        }
        count += 1;
    }
    if count != nnz {
        return Err(bad(&format!("declared {nnz} entries, found {count}")));
    }
    Ok(TridiagonalMatrix::new(diag, sub, sup)?)
}

pub fn write_laplacian_json(path: &Path, t: &TridiagonalMatrix) -> Result<(), SynthesisError> {
    std::fs::write(path, serde_json::to_string_pretty(t)?)?;
    Ok(())
}

pub fn read_laplacian_json(path: &Path) -> Result<TridiagonalMatrix, SynthesisError> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}
