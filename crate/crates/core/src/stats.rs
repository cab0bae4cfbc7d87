use statrs::function::gamma::gamma_ur;

/// Regularized upper incomplete gamma `Q(a, x)`, with `Q(a, 0) = 1`.
pub(crate) fn igamc(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else {
        gamma_ur(a, x)
    }
}

/// Upper tail of the chi-square distribution with `dof` degrees of freedom.
pub(crate) fn chi_square_sf(statistic: f64, dof: f64) -> f64 {
    igamc(dof / 2.0, statistic / 2.0)
}
