//! Univariate series, sliding-window slicing and supervised pairing.
//!
//! Ordinals of slices are 1-based throughout: slice `i` starts at the
//! series value `v_i`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ordered `(label, value)` observations.
///
/// Timestamps are opaque labels; only their position matters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries<T> {
    timestamps: Vec<String>,
    values: Vec<T>,
}

impl<T: Scalar> TimeSeries<T> {
    pub fn new(timestamps: Vec<String>, values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if timestamps.len() != values.len() {
            return Err(Error::LengthMismatch {
                left: timestamps.len(),
                right: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonNumericValue {
                row: pos + 1,
                value: values[pos].to_string(),
            });
        }
        Ok(Self { timestamps, values })
    }

    /// Series labelled `1..=n`.
    pub fn from_values(values: Vec<T>) -> Result<Self> {
        let timestamps = (1..=values.len()).map(|i| i.to_string()).collect();
        Self::new(timestamps, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn timestamps(&self) -> &[String] {
        &self.timestamps
    }
}

/// Reads a univariate series from a CSV file with a header row.
///
/// Rows are kept in file order. A value that does not parse as a finite
/// number is an error reporting its 1-based data row. Without a timestamp
/// column, rows are labelled by their data row number.
pub fn load_series<T: Scalar>(
    path: impl AsRef<Path>,
    value_column: &str,
    timestamp_column: Option<&str>,
) -> Result<TimeSeries<T>> {
    let path = path.as_ref();
    if !path.is_file() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let file = std::fs::File::open(path)?;
    read_series(file, value_column, timestamp_column)
}

/// Same as [`load_series`] over any reader.
pub fn read_series<T: Scalar, R: std::io::Read>(
    reader: R,
    value_column: &str,
    timestamp_column: Option<&str>,
) -> Result<TimeSeries<T>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Csv(e.to_string()))?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let value_idx = find(value_column)?;
    let ts_idx = timestamp_column.map(find).transpose()?;

    let mut timestamps = Vec::new();
    let mut values = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Csv(e.to_string()))?;
        let raw = record.get(value_idx).unwrap_or("");
        let value = raw
            .parse::<T>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::NonNumericValue {
                row,
                value: raw.to_string(),
            })?;
        let label = match ts_idx {
            Some(j) => record.get(j).unwrap_or("").to_string(),
            None => row.to_string(),
        };
        timestamps.push(label);
        values.push(value);
    }
    TimeSeries::new(timestamps, values)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSlice<T> {
    /// 1-based position of the first value in the source series.
    pub start_ordinal: usize,
    pub values: Vec<T>,
}

impl<T> TimeSlice<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSliceSet<T> {
    window_size: usize,
    slices: Vec<TimeSlice<T>>,
}

impl<T> TimeSliceSet<T> {
    pub fn window_size(&self) -> usize {
        self.window_size
    }

    pub fn slices(&self) -> &[TimeSlice<T>] {
        &self.slices
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }
}

/// Every contiguous window of `ws` values, `n - ws + 1` of them.
pub fn sliding_window<T: Scalar>(series: &TimeSeries<T>, ws: usize) -> Result<TimeSliceSet<T>> {
    if ws == 0 {
        return Err(Error::WindowNonPositive);
    }
    let n = series.len();
    if ws > n {
        return Err(Error::WindowTooLarge { window: ws, len: n });
    }
    let slices = series
        .values()
        .windows(ws)
        .enumerate()
        .map(|(i, w)| TimeSlice {
            start_ordinal: i + 1,
            values: w.to_vec(),
        })
        .collect();
    Ok(TimeSliceSet {
        window_size: ws,
        slices,
    })
}

/// Slices paired with the value that follows them.
#[derive(Debug, Clone, PartialEq)]
pub struct SupervisedSet<T> {
    pub examples: Vec<(TimeSlice<T>, T)>,
    /// The final slice of the series, which has no target. Only the set
    /// produced by [`make_supervised`] (and the test half of a split) keep it.
    pub prediction_slice: Option<TimeSlice<T>>,
}

impl<T> SupervisedSet<T> {
    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }
}

pub fn make_supervised<T: Scalar>(slice_set: &TimeSliceSet<T>, series: &TimeSeries<T>) -> Result<SupervisedSet<T>> {
    let values = series.values();
    let ws = slice_set.window_size();
    if slice_set.len() != values.len().saturating_sub(ws) + 1 || ws > values.len() {
        return Err(Error::Mismatch { ordinal: 0 });
    }
    for slice in slice_set.slices() {
        let start = slice.start_ordinal - 1;
        if slice.values.as_slice() != &values[start..start + ws] {
            return Err(Error::Mismatch {
                ordinal: slice.start_ordinal,
            });
        }
    }
    let (last, rest) = slice_set.slices().split_last().ok_or(Error::InsufficientExamples)?;
    if rest.is_empty() {
        return Err(Error::InsufficientExamples);
    }
    let examples = rest
        .iter()
        .map(|s| (s.clone(), values[s.start_ordinal - 1 + ws]))
        .collect();
    Ok(SupervisedSet {
        examples,
        prediction_slice: Some(last.clone()),
    })
}

/// Number of leading examples that go to training: `ceil(count * fraction)`.
pub fn train_count(count: usize, fraction: f64) -> Result<usize> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidFraction(fraction));
    }
    if count < 2 {
        return Err(Error::TooFewExamples { count });
    }
    // 25 * 0.28 evaluates to 7.000000000000001; without the nudge that
    // would round up to 8.
    let exact = count as f64 * fraction;
    Ok(((exact - 1e-9).ceil() as usize).clamp(1, count))
}

/// Chronological split: the first `ceil(count * fraction)` examples train.
pub fn train_test_split<T: Scalar>(
    sup: &SupervisedSet<T>,
    train_fraction: f64,
) -> Result<(SupervisedSet<T>, SupervisedSet<T>)> {
    let k = train_count(sup.len(), train_fraction)?;
    let (train, test) = sup.examples.split_at(k);
    Ok((
        SupervisedSet {
            examples: train.to_vec(),
            prediction_slice: None,
        },
        SupervisedSet {
            examples: test.to_vec(),
            prediction_slice: sup.prediction_slice.clone(),
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(values: &[f64]) -> TimeSeries<f64> {
        TimeSeries::from_values(values.to_vec()).unwrap()
    }

    #[test]
    fn load_small_csv() {
        let s: TimeSeries<f64> = read_series("t,v\n1,10\n2,20".as_bytes(), "v", Some("t")).unwrap();
        assert_eq!(s.values(), &[10.0, 20.0]);
        assert_eq!(s.timestamps(), &["1", "2"]);
    }

    #[test]
    fn load_reports_bad_row() {
        let err = read_series::<f64, _>("t,v\n1,abc".as_bytes(), "v", None).unwrap_err();
        assert!(matches!(err, Error::NonNumericValue { row: 1, .. }));
        let err = read_series::<f64, _>("t,v\n1,2\n2,NaN".as_bytes(), "v", None).unwrap_err();
        assert!(matches!(err, Error::NonNumericValue { row: 2, .. }));
    }

    #[test]
    fn load_errors() {
        let err = read_series::<f64, _>("t,v\n1,2".as_bytes(), "x", None).unwrap_err();
        assert!(matches!(err, Error::MissingColumn(c) if c == "x"));
        let err = read_series::<f64, _>("t,v\n".as_bytes(), "v", None).unwrap_err();
        assert!(matches!(err, Error::EmptySeries));
        let err = load_series::<f64>("/definitely/not/here.csv", "v", None).unwrap_err();
        assert!(matches!(err, Error::MissingFile(_)));
    }

    #[test]
    fn load_295_rows() {
        let mut csv = String::from("month,cci\n");
        for i in 0..295 {
            csv.push_str(&format!("m{i},{}\n", 4700.0 + i as f64 * 17.5));
        }
        let s: TimeSeries<f64> = read_series(csv.as_bytes(), "cci", Some("month")).unwrap();
        assert_eq!(s.len(), 295);
        assert_eq!(s.timestamps()[0], "m0");
    }

    #[test]
    fn window_examples() {
        let set = sliding_window(&series(&[1., 2., 3., 4., 5.]), 3).unwrap();
        let got: Vec<_> = set.slices().iter().map(|s| s.values.clone()).collect();
        assert_eq!(got, vec![vec![1., 2., 3.], vec![2., 3., 4.], vec![3., 4., 5.]]);
        assert_eq!(set.slices()[2].start_ordinal, 3);

        let full = sliding_window(&series(&[1., 2., 3., 4.]), 4).unwrap();
        assert_eq!(full.len(), 1);
        assert_eq!(full.slices()[0].values, vec![1., 2., 3., 4.]);

        let long = series(&vec![0.0; 295]);
        assert_eq!(sliding_window(&long, 180).unwrap().len(), 116);
    }

    #[test]
    fn window_errors() {
        let s = series(&[1., 2.]);
        assert!(matches!(sliding_window(&s, 0), Err(Error::WindowNonPositive)));
        assert!(matches!(
            sliding_window(&s, 3),
            Err(Error::WindowTooLarge { window: 3, len: 2 })
        ));
    }

    #[test]
    fn supervised_pairs() {
        let s = series(&[1., 2., 3., 4.]);
        let sup = make_supervised(&sliding_window(&s, 2).unwrap(), &s).unwrap();
        assert_eq!(sup.examples.len(), 2);
        assert_eq!(sup.examples[0].0.values, vec![1., 2.]);
        assert_eq!(sup.examples[0].1, 3.);
        assert_eq!(sup.examples[1].1, 4.);
        assert_eq!(sup.prediction_slice.unwrap().values, vec![3., 4.]);

        let full = sliding_window(&s, 4).unwrap();
        assert!(matches!(make_supervised(&full, &s), Err(Error::InsufficientExamples)));
    }

    #[test]
    fn supervised_rejects_foreign_slices() {
        let a = series(&[1., 2., 3., 4.]);
        let b = series(&[1., 2., 9., 4.]);
        let set = sliding_window(&a, 2).unwrap();
        assert!(matches!(make_supervised(&set, &b), Err(Error::Mismatch { ordinal: 2 })));
    }

    #[test]
    fn split_counts() {
        let s = series(&(0..12).map(f64::from).collect::<Vec<_>>());
        let sup = make_supervised(&sliding_window(&s, 2).unwrap(), &s).unwrap();
        assert_eq!(sup.len(), 10);
        let (train, test) = train_test_split(&sup, 0.8).unwrap();
        assert_eq!((train.len(), test.len()), (8, 2));

        assert_eq!(train_count(115, 0.8).unwrap(), 92);
        assert_eq!(train_count(25, 0.28).unwrap(), 7);

        let one = SupervisedSet {
            examples: vec![sup.examples[0].clone()],
            prediction_slice: None,
        };
        assert!(matches!(
            train_test_split(&one, 0.8),
            Err(Error::TooFewExamples { count: 1 })
        ));
        assert!(matches!(train_count(10, 1.0), Err(Error::InvalidFraction(_))));
    }

    proptest! {
        #[test]
        fn slice_count_and_reassembly(
            values in prop::collection::vec(-1e6f64..1e6, 1..200),
            ws_seed in 0usize..10_000,
        ) {
            let n = values.len();
            let ws = ws_seed % n + 1;
            let s = series(&values);
            let set = sliding_window(&s, ws).unwrap();
            prop_assert_eq!(set.len(), n - ws + 1);
            for (k, sl) in set.slices().iter().enumerate() {
                prop_assert_eq!(sl.start_ordinal, k + 1);
            }
            let mut rebuilt: Vec<f64> = set.slices().iter().map(|sl| sl.values[0]).collect();
            rebuilt.pop();
            rebuilt.extend_from_slice(&set.slices().last().unwrap().values);
            prop_assert_eq!(rebuilt, values);
        }

        #[test]
        fn split_is_ordered_partition(n in 3usize..150, frac in 0.05f64..0.95) {
            let s = series(&(0..n).map(|i| i as f64).collect::<Vec<_>>());
            let sup = make_supervised(&sliding_window(&s, 1).unwrap(), &s).unwrap();
            let (train, test) = train_test_split(&sup, frac).unwrap();
            let joined: Vec<_> = train.examples.iter().chain(&test.examples).cloned().collect();
            prop_assert_eq!(joined, sup.examples);
        }
    }
}
