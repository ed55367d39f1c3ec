use crate::numerics::format_sig;
use crate::{Error, Result};
use nalgebra::DMatrix;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

/// Single-photon transition probabilities and two-photon visibilities of
/// an `m`-mode interferometer, with their error bars.
///
/// `single[(J, k)]` is the probability that a photon entering mode `k`
/// leaves through mode `J`. The visibility tensor is indexed
/// `(k, h, J, G)` by input pair then output pair and is symmetric in each
/// pair; entries with repeated inputs or outputs are unused and zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentalDataset {
    pub m: usize,
    pub single: DMatrix<f64>,
    pub single_err: DMatrix<f64>,
    visib: Vec<f64>,
    visib_err: Vec<f64>,
}

impl ExperimentalDataset {
    /// Empty dataset: zero probabilities, visibilities and errors.
    pub fn zeros(m: usize) -> Self {
        Self {
            m,
            single: DMatrix::zeros(m, m),
            single_err: DMatrix::zeros(m, m),
            visib: vec![0.0; m.pow(4)],
            visib_err: vec![0.0; m.pow(4)],
        }
    }

    fn idx(&self, k: usize, h: usize, j: usize, g: usize) -> usize {
        let m = self.m;
        ((k * m + h) * m + j) * m + g
    }

    pub fn visibility(&self, k: usize, h: usize, j: usize, g: usize) -> f64 {
        self.visib[self.idx(k, h, j, g)]
    }

    pub fn visibility_err(&self, k: usize, h: usize, j: usize, g: usize) -> f64 {
        self.visib_err[self.idx(k, h, j, g)]
    }

    /// Stores `v ± sigma` on all four symmetric copies of the index.
    pub fn set_visibility(&mut self, k: usize, h: usize, j: usize, g: usize, v: f64, sigma: f64) {
        for (a, b) in [(k, h), (h, k)] {
            for (c, d) in [(j, g), (g, j)] {
                let i = self.idx(a, b, c, d);
                self.visib[i] = v;
                self.visib_err[i] = sigma;
            }
        }
    }

    /// Unordered input pairs `k < h` and output pairs `J < G`.
    pub fn pair_indices(&self) -> Vec<(usize, usize, usize, usize)> {
        let m = self.m;
        let mut out = Vec::new();
        for k in 0..m {
            for h in k + 1..m {
                for j in 0..m {
                    for g in j + 1..m {
                        out.push((k, h, j, g));
                    }
                }
            }
        }
        out
    }

    /// Copy with inputs and outputs relabelled: new index `i` reads old
    /// index `in_perm[i]` (inputs) or `out_perm[i]` (outputs).
    pub fn relabel(&self, in_perm: &[usize], out_perm: &[usize]) -> Self {
        let m = self.m;
        let mut out = Self::zeros(m);
        for j in 0..m {
            for k in 0..m {
                out.single[(j, k)] = self.single[(out_perm[j], in_perm[k])];
                out.single_err[(j, k)] = self.single_err[(out_perm[j], in_perm[k])];
            }
        }
        for (k, h, j, g) in self.pair_indices() {
            let (a, b, c, d) = (in_perm[k], in_perm[h], out_perm[j], out_perm[g]);
            out.set_visibility(k, h, j, g, self.visibility(a, b, c, d), self.visibility_err(a, b, c, d));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.m;
        if m < 2 {
            return Err(Error::InvalidInput("datasets need at least two modes".into()));
        }
        for mat in [&self.single, &self.single_err] {
            if mat.shape() != (m, m) {
                return Err(Error::Dimension(format!("{:?} matrix in an {m}-mode dataset", mat.shape())));
            }
        }
        if self.visib.len() != m.pow(4) || self.visib_err.len() != m.pow(4) {
            return Err(Error::Dimension("visibility tensor has the wrong size".into()));
        }
        let finite = self.single.iter().chain(self.single_err.iter()).chain(&self.visib).chain(&self.visib_err);
        if finite.into_iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("dataset contains non-finite values".into()));
        }
        Ok(())
    }

    /// Writes `single.csv`, `single_err.csv` and `visib.csv` into `dir`.
    pub fn write_dir(&self, dir: &Path, digits: usize) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        write_matrix(File::create(dir.join("single.csv"))?, &self.single, digits)?;
        write_matrix(File::create(dir.join("single_err.csv"))?, &self.single_err, digits)?;
        self.write_visibilities(File::create(dir.join("visib.csv"))?, digits)
    }

    pub fn read_dir(dir: &Path) -> Result<Self> {
        let single = read_matrix(File::open(dir.join("single.csv"))?)?;
        let m = single.nrows();
        let single_err = match File::open(dir.join("single_err.csv")) {
            Ok(f) => read_matrix(f)?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => DMatrix::zeros(m, m),
            Err(e) => return Err(e.into()),
        };
        let mut data = Self::zeros(m);
        data.single = single;
        data.single_err = single_err;
        data.read_visibilities(File::open(dir.join("visib.csv"))?)?;
        data.validate()?;
        Ok(data)
    }

    /// Columns `k,h,J,G,V,sigma` with 1-based indices, one row per
    /// unordered input and output pair.
    pub fn write_visibilities<W: Write>(&self, w: W, digits: usize) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["k", "h", "J", "G", "V", "sigma"])?;
        for (k, h, j, g) in self.pair_indices() {
            out.write_record([
                (k + 1).to_string(),
                (h + 1).to_string(),
                (j + 1).to_string(),
                (g + 1).to_string(),
                format_sig(self.visibility(k, h, j, g), digits),
                format_sig(self.visibility_err(k, h, j, g), digits),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_visibilities<R: Read>(&mut self, r: R) -> Result<()> {
        let mut rdr = csv::Reader::from_reader(r);
        for rec in rdr.records() {
            let rec = rec?;
            if rec.len() != 6 {
                return Err(Error::Parse(format!("visibility row with {} columns", rec.len())));
            }
            let mut idx = [0usize; 4];
            for (slot, field) in idx.iter_mut().zip(rec.iter()) {
                let v: usize = field.trim().parse().map_err(|_| Error::Parse(format!("bad index {field:?}")))?;
                if v == 0 || v > self.m {
                    return Err(Error::Parse(format!("index {v} outside 1..={}", self.m)));
                }
                *slot = v - 1;
            }
            let num = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::Parse(e.to_string()));
            let [k, h, j, g] = idx;
            if k == h || j == g {
                return Err(Error::Parse("visibility with repeated modes".into()));
            }
            self.set_visibility(k, h, j, g, num(&rec[4])?, num(&rec[5])?);
        }
        Ok(())
    }
}

pub(crate) fn write_matrix<W: Write>(w: W, mat: &DMatrix<f64>, digits: usize) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    for i in 0..mat.nrows() {
        out.write_record((0..mat.ncols()).map(|j| format_sig(mat[(i, j)], digits)))?;
    }
    out.flush()?;
    Ok(())
}

pub(crate) fn read_matrix<R: Read>(r: R) -> Result<DMatrix<f64>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(r);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("expected a non-empty square matrix".into()));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}
