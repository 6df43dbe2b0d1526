use serde::Serialize;

/// Sample mean and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub mean: Option<f64>,
    /// `None` with fewer than two observations.
    pub stderr: Option<f64>,
}

pub fn summarize(xs: &[f64]) -> Summary {
    let count = xs.len();
    if count == 0 {
        return Summary {
            count,
            mean: None,
            stderr: None,
        };
    }
    let nf = count as f64;
    let mean = xs.iter().sum::<f64>() / nf;
    let stderr = (count > 1).then(|| {
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);
        (var / nf).sqrt()
    });
    Summary {
        count,
        mean: Some(mean),
        stderr,
    }
}
