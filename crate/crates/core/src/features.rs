//! Feature functions and the function sequence that turns each time slice
//! into a fixed-length feature vector.

use std::collections::HashSet;
use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{TimeSlice, TimeSliceSet};

/// Maps one slice (and its 1-based ordinal in the slice set) to a scalar.
pub trait FeatureFunction<T: Scalar>: Send + Sync {
    fn name(&self) -> &str;
    fn evaluate(&self, slice: &TimeSlice<T>, ordinal: usize) -> Result<T>;
}

pub fn feat_index<T: Scalar>(ordinal: usize) -> T {
    T::from_count(ordinal)
}

pub fn feat_mean<T: Scalar>(values: &[T]) -> T {
    values.iter().copied().sum::<T>() / T::from_count(values.len())
}

/// Population standard deviation.
pub fn feat_std<T: Scalar>(values: &[T]) -> T {
    let mean = feat_mean(values);
    let ss: T = values.iter().map(|&v| (v - mean) * (v - mean)).sum();
    (ss / T::from_count(values.len())).sqrt()
}

pub fn feat_distance<T: Scalar>(values: &[T]) -> T {
    let (lo, hi) = values.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    hi - lo
}

/// Approximate entropy `ApEn(m, r) = Φ^m(r) - Φ^{m+1}(r)`.
///
/// Embedding vectors are compared with the Chebyshev distance and
/// self-matches are counted, so every `C_i` is at least `1 / (N - m + 1)`.
pub fn feat_apen<T: Scalar>(values: &[T], embedding: usize, r: T) -> Result<T> {
    let n = values.len();
    if embedding == 0 || n < embedding + 1 {
        return Err(Error::SliceTooShort {
            len: n,
            needed: embedding.max(1) + 1,
        });
    }
    let count_m = n - embedding + 1;
    let count_m1 = n - embedding;
    let mut c_m = vec![0usize; count_m];
    let mut c_m1 = vec![0usize; count_m1];

    for i in 0..count_m {
        for j in i..count_m {
            let mut d = T::zero();
            for k in 0..embedding {
                d = d.max((values[i + k] - values[j + k]).abs());
            }
            if d > r {
                continue;
            }
            c_m[i] += 1;
            if j != i {
                c_m[j] += 1;
            }
            if j < count_m1 && (values[i + embedding] - values[j + embedding]).abs() <= r {
                c_m1[i] += 1;
                if j != i {
                    c_m1[j] += 1;
                }
            }
        }
    }

    let phi = |counts: &[usize]| -> T {
        let total = T::from_count(counts.len());
        let s: T = counts.iter().map(|&c| (T::from_count(c) / total).ln()).sum();
        s / total
    };
    Ok(phi(&c_m) - phi(&c_m1))
}

/// Sum of node degrees (`2|E|`) of the natural visibility graph.
///
/// Points sit at abscissae `1..=len`. Two points are linked iff every
/// intermediate point lies strictly below the segment joining them.
pub fn feat_vg_degree<T: Scalar>(values: &[T]) -> T {
    let n = values.len();
    let mut edges = 0usize;
    for a in 0..n {
        // Steepest intermediate seen so far, as (rise, run) from `a`.
        let mut best: Option<(T, T)> = None;
        for b in a + 1..n {
            let rise = values[b] - values[a];
            let run = T::from_count(b - a);
            let visible = match best {
                None => true,
                // rise/run > best_rise/best_run, cross-multiplied (runs > 0).
                Some((br, bu)) => rise * bu > br * run,
            };
            if visible {
                edges += 1;
            }
            if best.is_none_or(|(br, bu)| rise * bu > br * run) {
                best = Some((rise, run));
            }
        }
    }
    T::from_count(2 * edges)
}

/// Tolerance `r` for approximate entropy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApenTolerance<T> {
    /// `r = k * std(slice)`; a constant slice yields ApEn 0.
    StdFraction(T),
    Absolute(T),
}

impl<T: Scalar> Default for ApenTolerance<T> {
    fn default() -> Self {
        ApenTolerance::StdFraction(T::lit(0.2))
    }
}

pub struct Index;
pub struct Mean;
pub struct StdDev;
pub struct Distance;
pub struct ApproxEntropy<T> {
    pub embedding: usize,
    pub tolerance: ApenTolerance<T>,
}
pub struct VisibilityDegree;

impl<T: Scalar> FeatureFunction<T> for Index {
    fn name(&self) -> &str {
        "index"
    }
    fn evaluate(&self, _: &TimeSlice<T>, ordinal: usize) -> Result<T> {
        Ok(feat_index(ordinal))
    }
}

impl<T: Scalar> FeatureFunction<T> for Mean {
    fn name(&self) -> &str {
        "mean"
    }
    fn evaluate(&self, slice: &TimeSlice<T>, _: usize) -> Result<T> {
        nonempty(slice)?;
        Ok(feat_mean(&slice.values))
    }
}

impl<T: Scalar> FeatureFunction<T> for StdDev {
    fn name(&self) -> &str {
        "std"
    }
    fn evaluate(&self, slice: &TimeSlice<T>, _: usize) -> Result<T> {
        nonempty(slice)?;
        Ok(feat_std(&slice.values))
    }
}

impl<T: Scalar> FeatureFunction<T> for Distance {
    fn name(&self) -> &str {
        "distance"
    }
    fn evaluate(&self, slice: &TimeSlice<T>, _: usize) -> Result<T> {
        nonempty(slice)?;
        Ok(feat_distance(&slice.values))
    }
}

impl<T: Scalar> FeatureFunction<T> for ApproxEntropy<T> {
    fn name(&self) -> &str {
        "apen"
    }
    fn evaluate(&self, slice: &TimeSlice<T>, _: usize) -> Result<T> {
        let r = match self.tolerance {
            ApenTolerance::Absolute(r) => r,
            ApenTolerance::StdFraction(k) => {
                nonempty(slice)?;
                let sd = feat_std(&slice.values);
                if sd == T::zero() {
                    if slice.len() < self.embedding + 1 {
                        return Err(Error::SliceTooShort {
                            len: slice.len(),
                            needed: self.embedding + 1,
                        });
                    }
                    return Ok(T::zero());
                }
                k * sd
            }
        };
        feat_apen(&slice.values, self.embedding, r)
    }
}

impl<T: Scalar> FeatureFunction<T> for VisibilityDegree {
    fn name(&self) -> &str {
        "vg_degree"
    }
    fn evaluate(&self, slice: &TimeSlice<T>, _: usize) -> Result<T> {
        Ok(feat_vg_degree(&slice.values))
    }
}

fn nonempty<T>(slice: &TimeSlice<T>) -> Result<()> {
    if slice.is_empty() {
        Err(Error::SliceTooShort { len: 0, needed: 1 })
    } else {
        Ok(())
    }
}

/// Ordered, non-empty list of uniquely named feature functions.
pub struct FunctionSequence<T: Scalar> {
    functions: Vec<Box<dyn FeatureFunction<T>>>,
}

impl<T: Scalar> FunctionSequence<T> {
    pub fn new(functions: Vec<Box<dyn FeatureFunction<T>>>) -> Result<Self> {
        if functions.is_empty() {
            return Err(Error::EmptyFunctionSequence);
        }
        let mut seen = HashSet::new();
        for f in &functions {
            if !seen.insert(f.name().to_string()) {
                return Err(Error::DuplicateFeatureName(f.name().to_string()));
            }
        }
        Ok(Self { functions })
    }

    /// index, mean, std, distance, apen, vg_degree.
    pub fn standard(apen_embedding: usize, apen_tolerance: ApenTolerance<T>) -> Self {
        Self::new(vec![
            Box::new(Index),
            Box::new(Mean),
            Box::new(StdDev),
            Box::new(Distance),
            Box::new(ApproxEntropy {
                embedding: apen_embedding,
                tolerance: apen_tolerance,
            }),
            Box::new(VisibilityDegree),
        ])
        .expect("standard sequence is valid")
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.functions.iter().map(|f| f.name().to_string()).collect()
    }

    /// Feature vector of one slice, in sequence order.
    pub fn apply(&self, slice: &TimeSlice<T>, ordinal: usize) -> Result<Vec<T>> {
        self.functions
            .iter()
            .map(|f| {
                f.evaluate(slice, ordinal).map_err(|e| Error::Feature {
                    name: f.name().to_string(),
                    ordinal,
                    source: Box::new(e),
                })
            })
            .collect()
    }
}

/// Row-major `rows x cols` matrix of feature values with column names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix<T> {
    names: Vec<String>,
    rows: usize,
    data: Vec<T>,
}

impl<T: Scalar> FeatureMatrix<T> {
    pub fn from_rows(names: Vec<String>, rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = names.len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in &rows {
            if r.len() != cols {
                return Err(Error::ShapeMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            names,
            rows: rows.len(),
            data,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.names.len()
    }

    pub fn row(&self, i: usize) -> &[T] {
        let c = self.cols();
        &self.data[i * c..(i + 1) * c]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = T> + '_ {
        self.data.iter().skip(j).step_by(self.cols()).copied()
    }

    /// CSV with a header of feature names; values use shortest round-trip
    /// formatting.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.names).map_err(|e| Error::Csv(e.to_string()))?;
        for i in 0..self.rows {
            w.write_record(self.row(i).iter().map(|v| v.to_string()))
                .map_err(|e| Error::Csv(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Applies the function sequence to every slice. Rows are computed in
/// parallel; each row is independent so the result equals sequential
/// evaluation bit for bit.
pub fn build_feature_matrix<T: Scalar>(
    slice_set: &TimeSliceSet<T>,
    fs: &FunctionSequence<T>,
) -> Result<FeatureMatrix<T>> {
    if slice_set.is_empty() {
        return Err(Error::EmptyInput);
    }
    let rows = slice_set
        .slices()
        .par_iter()
        .map(|s| fs.apply(s, s.start_ordinal))
        .collect::<Result<Vec<_>>>()?;
    FeatureMatrix::from_rows(fs.names(), rows)
}

/// Mean/std pair for one column. A zero std means "center only".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Standardizer<T> {
    pub mean: T,
    pub std: T,
}

impl<T: Scalar> Standardizer<T> {
    pub fn fit(values: &[T]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Self {
            mean: feat_mean(values),
            std: feat_std(values),
        })
    }

    pub fn identity() -> Self {
        Self {
            mean: T::zero(),
            std: T::one(),
        }
    }

    pub fn transform(&self, x: T) -> T {
        if self.std == T::zero() {
            x - self.mean
        } else {
            (x - self.mean) / self.std
        }
    }

    pub fn inverse(&self, z: T) -> T {
        if self.std == T::zero() {
            z + self.mean
        } else {
            z * self.std + self.mean
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnScaler<T> {
    pub columns: Vec<Standardizer<T>>,
}

impl<T: Scalar> ColumnScaler<T> {
    pub fn transform_row(&self, row: &[T]) -> Result<Vec<T>> {
        if row.len() != self.columns.len() {
            return Err(Error::ShapeMismatch {
                expected: self.columns.len(),
                found: row.len(),
            });
        }
        Ok(row.iter().zip(&self.columns).map(|(&x, s)| s.transform(x)).collect())
    }

    pub fn inverse_row(&self, row: &[T]) -> Result<Vec<T>> {
        if row.len() != self.columns.len() {
            return Err(Error::ShapeMismatch {
                expected: self.columns.len(),
                found: row.len(),
            });
        }
        Ok(row.iter().zip(&self.columns).map(|(&z, s)| s.inverse(z)).collect())
    }

    pub fn transform(&self, matrix: &FeatureMatrix<T>) -> Result<FeatureMatrix<T>> {
        let rows = (0..matrix.rows())
            .map(|i| self.transform_row(matrix.row(i)))
            .collect::<Result<Vec<_>>>()?;
        FeatureMatrix::from_rows(matrix.names().to_vec(), rows)
    }
}

/// Fits per-column mean/std on `train_rows` only and transforms every row.
pub fn fit_standardize<T: Scalar>(
    matrix: &FeatureMatrix<T>,
    train_rows: Range<usize>,
) -> Result<(FeatureMatrix<T>, ColumnScaler<T>)> {
    if train_rows.is_empty() || train_rows.end > matrix.rows() {
        return Err(Error::EmptyTrainRange);
    }
    let columns = (0..matrix.cols())
        .map(|j| {
            let col: Vec<T> = matrix.column(j).skip(train_rows.start).take(train_rows.len()).collect();
            Standardizer::fit(&col)
        })
        .collect::<Result<Vec<_>>>()?;
    let scaler = ColumnScaler { columns };
    Ok((scaler.transform(matrix)?, scaler))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{sliding_window, TimeSeries};
    use proptest::prelude::*;

    fn slice(values: &[f64]) -> TimeSlice<f64> {
        TimeSlice {
            start_ordinal: 1,
            values: values.to_vec(),
        }
    }

    // Direct transcription of the definition: materialise every embedding
    // vector and count matches pair by pair.
    fn apen_oracle(x: &[f64], m: usize, r: f64) -> f64 {
        let phi = |m: usize| {
            let vecs: Vec<&[f64]> = (0..=x.len() - m).map(|i| &x[i..i + m]).collect();
            let n = vecs.len() as f64;
            let mut acc = 0.0;
            for a in &vecs {
                let mut c = 0usize;
                for b in &vecs {
                    let d = a.iter().zip(b.iter()).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
                    if d <= r {
                        c += 1;
                    }
                }
                acc += (c as f64 / n).ln();
            }
            acc / n
        };
        phi(m) - phi(m + 1)
    }

    // O(n^3): check every intermediate point against the chord.
    fn vg_oracle(v: &[f64]) -> f64 {
        let n = v.len();
        let mut deg = 0usize;
        for a in 0..n {
            for b in a + 1..n {
                let (fa, fb) = ((a + 1) as f64, (b + 1) as f64);
                let ok = (a + 1..b).all(|c| {
                    let fc = (c + 1) as f64;
                    v[c] < v[b] + (v[a] - v[b]) * (fb - fc) / (fb - fa)
                });
                if ok {
                    deg += 2;
                }
            }
        }
        deg as f64
    }

    #[test]
    fn simple_statistics() {
        assert_eq!(feat_index::<f64>(1), 1.0);
        assert_eq!(feat_index::<f64>(7), 7.0);
        assert_eq!(feat_index::<f64>(116), 116.0);
        assert_eq!(feat_mean(&[1.0, 2.0, 3.0]), 2.0);
        assert_eq!(feat_mean(&[5.0; 4]), 5.0);
        assert_eq!(feat_mean(&[-1.0, 1.0]), 0.0);
        assert_eq!(feat_std(&[5.0, 5.0, 5.0]), 0.0);
        assert_eq!(feat_std(&[0.0, 2.0]), 1.0);
        assert!((feat_std(&[1.0f64, 2.0, 3.0, 4.0]) - 1.118_033_988_749_895).abs() < 1e-15);
        assert_eq!(feat_distance(&[3.0, 1.0, 7.0]), 6.0);
        assert_eq!(feat_distance(&[4.0, 4.0]), 0.0);
        assert_eq!(feat_distance(&[-2.0, -9.0, 5.0]), 14.0);
    }

    #[test]
    fn apen_constant_is_zero() {
        for r in [0.0, 0.3, 10.0] {
            assert_eq!(feat_apen(&[3.0; 5], 2, r).unwrap(), 0.0);
        }
        let f = ApproxEntropy {
            embedding: 2,
            tolerance: ApenTolerance::default(),
        };
        assert_eq!(f.evaluate(&slice(&[3.0; 5]), 1).unwrap(), 0.0);
    }

    #[test]
    fn apen_alternating() {
        // Seven 2-vectors: four (0,1), three (1,0); six 3-vectors split 3/3.
        let x = [0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0];
        let oracle = apen_oracle(&x, 2, 0.5);
        let frozen = (3.0f64 / 7.0).ln() * 3.0 / 7.0 + (4.0f64 / 7.0).ln() * 4.0 / 7.0 - (3.0f64 / 6.0).ln();
        assert!((oracle - frozen).abs() < 1e-15);
        assert!((feat_apen(&x, 2, 0.5).unwrap() - frozen).abs() < 1e-12);
    }

    #[test]
    fn apen_too_short() {
        assert!(matches!(
            feat_apen(&[1.0, 2.0], 2, 0.1),
            Err(Error::SliceTooShort { len: 2, needed: 3 })
        ));
    }

    #[test]
    fn visibility_shapes() {
        let concave: Vec<f64> = (1..=7).map(|t| -((t - 4) as f64).powi(2)).collect();
        assert_eq!(feat_vg_degree(&concave), 12.0);
        assert_eq!(vg_oracle(&concave), 12.0);
        let convex: Vec<f64> = (1..=5).map(|t| (t as f64).powi(2)).collect();
        assert_eq!(feat_vg_degree(&convex), 20.0);
        assert_eq!(vg_oracle(&convex), 20.0);
        assert_eq!(feat_vg_degree(&[4.2]), 0.0);
        // Collinear points block each other.
        assert_eq!(feat_vg_degree(&[1.0, 2.0, 3.0, 4.0]), 6.0);
    }

    #[test]
    fn matrix_shape_and_names() {
        let s = TimeSeries::from_values((0..5).map(|i| (i * i) as f64).collect()).unwrap();
        let set = sliding_window(&s, 3).unwrap();
        let fs = FunctionSequence::standard(2, ApenTolerance::default());
        let m = build_feature_matrix(&set, &fs).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 6));
        assert_eq!(m.names(), &["index", "mean", "std", "distance", "apen", "vg_degree"]);
        assert_eq!(m.row(2)[0], 3.0);
        assert_eq!(m.row(0)[1], 5.0 / 3.0);
    }

    #[test]
    fn sequence_validation() {
        assert!(matches!(
            FunctionSequence::<f64>::new(vec![]),
            Err(Error::EmptyFunctionSequence)
        ));
        assert!(matches!(
            FunctionSequence::<f64>::new(vec![Box::new(Mean), Box::new(Mean)]),
            Err(Error::DuplicateFeatureName(_))
        ));
    }

    #[test]
    fn feature_error_carries_ordinal() {
        let s = TimeSeries::from_values(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let set = sliding_window(&s, 2).unwrap();
        let fs = FunctionSequence::standard(2, ApenTolerance::Absolute(0.1));
        let err = build_feature_matrix(&set, &fs).unwrap_err();
        assert!(matches!(err, Error::Feature { ref name, .. } if name == "apen"));
    }

    #[test]
    fn standardize_examples() {
        let m = FeatureMatrix::from_rows(
            vec!["a".into(), "b".into()],
            vec![vec![2.0, 7.0], vec![4.0, 7.0], vec![10.0, 7.0]],
        )
        .unwrap();
        let (z, scaler) = fit_standardize(&m, 0..2).unwrap();
        assert_eq!(z.column(0).collect::<Vec<_>>(), vec![-1.0, 1.0, 7.0]);
        assert_eq!(z.column(1).collect::<Vec<_>>(), vec![0.0, 0.0, 0.0]);
        for i in 0..3 {
            assert_eq!(scaler.inverse_row(z.row(i)).unwrap(), m.row(i));
        }
        assert!(matches!(fit_standardize(&m, 1..1), Err(Error::EmptyTrainRange)));
        assert!(matches!(fit_standardize(&m, 0..4), Err(Error::EmptyTrainRange)));
    }

    #[test]
    fn parallel_matches_sequential() {
        let values: Vec<f64> = (0..120)
            .map(|i| ((i * 37 % 101) as f64).sin() * 50.0 + i as f64)
            .collect();
        let set = sliding_window(&TimeSeries::from_values(values).unwrap(), 40).unwrap();
        let fs = FunctionSequence::standard(2, ApenTolerance::default());
        let par = build_feature_matrix(&set, &fs).unwrap();
        for (i, s) in set.slices().iter().enumerate() {
            let seq = fs.apply(s, s.start_ordinal).unwrap();
            assert_eq!(
                par.row(i).iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                seq.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn works_in_f32() {
        let v: Vec<f32> = vec![1.0, 3.0, 2.0, 5.0, 4.0];
        // Edges: four adjacent pairs plus 2-4.
        assert_eq!(feat_vg_degree(&v), 10.0);
        assert_eq!(vg_oracle(&[1.0, 3.0, 2.0, 5.0, 4.0]), 10.0);
        assert!(feat_apen(&v, 2, 0.5f32).unwrap().is_finite());
    }

    proptest! {
        #[test]
        fn apen_matches_oracle(x in prop::collection::vec(-100.0f64..100.0, 3..50), k in 0.05f64..1.0) {
            let r = k * feat_std(&x);
            let got = feat_apen(&x, 2, r).unwrap();
            prop_assert!((got - apen_oracle(&x, 2, r)).abs() < 1e-10);
            prop_assert!(got.is_finite());
        }

        #[test]
        fn vg_matches_oracle(x in prop::collection::vec(-100.0f64..100.0, 1..40)) {
            prop_assert_eq!(feat_vg_degree(&x), vg_oracle(&x));
        }

        #[test]
        fn shift_invariance(raw in prop::collection::vec(-400i32..400, 4..40), c in -1000i32..1000) {
            // Multiples of 1/8 so the shifted values and all differences are exact.
            let x: Vec<f64> = raw.iter().map(|&v| v as f64 / 8.0).collect();
            let y: Vec<f64> = x.iter().map(|v| v + c as f64).collect();
            let r = 0.2 * feat_std(&x);
            prop_assert!((feat_std(&x) - feat_std(&y)).abs() < 1e-9);
            prop_assert_eq!(feat_distance(&x), feat_distance(&y));
            prop_assert_eq!(feat_apen(&x, 2, r).unwrap(), feat_apen(&y, 2, r).unwrap());
            prop_assert_eq!(feat_vg_degree(&x), feat_vg_degree(&y));
        }

        #[test]
        fn ordinal_dependence(x in prop::collection::vec(-50.0f64..50.0, 3..30), o1 in 1usize..500, o2 in 1usize..500) {
            let fs = FunctionSequence::standard(2, ApenTolerance::default());
            let s = slice(&x);
            let a = fs.apply(&s, o1).unwrap();
            let b = fs.apply(&s, o2).unwrap();
            prop_assert_eq!(a[0], o1 as f64);
            prop_assert_eq!(b[0], o2 as f64);
            prop_assert_eq!(&a[1..], &b[1..]);
            prop_assert!(a.iter().all(|v| v.is_finite()));
        }

        #[test]
        fn standardized_train_columns(rows in prop::collection::vec(prop::collection::vec(-1e3f64..1e3, 3), 2..40)) {
            let m = FeatureMatrix::from_rows(vec!["a".into(), "b".into(), "c".into()], rows).unwrap();
            let k = m.rows();
            let (z, scaler) = fit_standardize(&m, 0..k).unwrap();
            for j in 0..3 {
                let col: Vec<f64> = z.column(j).collect();
                prop_assert!(feat_mean(&col).abs() < 1e-10);
                if scaler.columns[j].std > 0.0 {
                    prop_assert!((feat_std(&col) - 1.0).abs() < 1e-10);
                }
            }
        }
    }
}
