use super::HarnessError;

/// Errors at or below this size are treated as round-off and left out of fits.
pub const ROUNDING_FLOOR: f64 = 1e-14;

/// Least-squares line through `(log tau, log error)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Rows dropped because the error was non-finite or at the rounding floor.
    pub excluded: Vec<(f64, f64)>,
}

pub fn fit_order(rows: &[(f64, f64)]) -> Result<OrderFit, HarnessError> {
    let (used, excluded): (Vec<_>, Vec<_>) = rows.iter().copied().partition(|&(tau, err)| {
        tau.is_finite() && tau > 0.0 && err.is_finite() && err > ROUNDING_FLOOR
    });
    if used.len() < 2 {
        return Err(HarnessError::TooFewRows {
            usable: used.len(),
            total: rows.len(),
        });
    }
    let n = used.len() as f64;
    let xs: Vec<f64> = used.iter().map(|r| r.0.ln()).collect();
    let ys: Vec<f64> = used.iter().map(|r| r.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(HarnessError::InvalidInput(
            "order fit needs at least two distinct step sizes".into(),
        ));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(OrderFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_lines() {
        let f = fit_order(&[(0.1, 0.1), (0.05, 0.05)]).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-14);
        assert!((f.r_squared - 1.0).abs() < 1e-14);
        assert!(f.intercept.abs() < 1e-14);
        let f = fit_order(&[(0.1, 0.01), (0.05, 0.0025)]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rounding_floor_rows_are_excluded() {
        let f = fit_order(&[(0.1, 1e-16), (0.05, 0.05), (0.025, 0.025), (0.01, -1.0)]).unwrap();
        assert_eq!(f.excluded, vec![(0.1, 1e-16), (0.01, -1.0)]);
        assert!((f.slope - 1.0).abs() < 1e-14);
    }

    #[test]
    fn too_few_rows() {
        assert!(matches!(
            fit_order(&[(0.1, 0.0), (0.05, 0.05)]),
            Err(HarnessError::TooFewRows { usable: 1, total: 2 })
        ));
        assert!(matches!(fit_order(&[(0.1, 0.1), (0.1, 0.2)]), Err(HarnessError::InvalidInput(_))));
    }
}
