use lrdw_web::{ratio_view, toeplitz_view, whiten_view, MAX_DIM};

#[test]
fn toeplitz_view_tracks_szego_limit() {
    let v = toeplitz_view(0.7, 256, false).unwrap();
    let eig = v.eigenvalues();
    assert_eq!(eig.len(), 256);
    assert!(eig.windows(2).all(|w| w[0] <= w[1]));
    assert!(eig[0] > 0.0);
    assert!(v.reference().windows(2).all(|w| w[0] <= w[1]));
    let coarse = toeplitz_view(0.7, 32, false).unwrap().ks();
    assert!(v.ks() < coarse, "{} vs {coarse}", v.ks());
}

#[test]
fn ratio_view_separates_estimators() {
    let v = ratio_view(0.9, 300, 600, 3).unwrap();
    let (b, u) = (v.biased(), v.unbiased());
    assert_eq!(b.len(), 300);
    assert_eq!(u.len(), 300);
    assert!(b.iter().chain(&u).all(|&x| x > 0.0));
    // the biased estimate underweights the long lags, so R̂⁻¹R has a wide tail
    assert!(
        b[299] > u[299],
        "biased max {} vs unbiased max {}",
        b[299],
        u[299]
    );
    assert_eq!(v.biased(), ratio_view(0.9, 300, 600, 3).unwrap().biased());
}

#[test]
fn ratio_view_drops_indefinite_unbiased() {
    let v = ratio_view(0.9, 60, 2, 1).unwrap();
    assert_eq!(v.biased().len(), 60);
    assert!(v.unbiased().is_empty());
}

#[test]
fn whiten_view_detects_spikes() {
    let v = whiten_view(0.7, 600, 360, &[10.0, 6.0, 4.0], 1).unwrap();
    assert_eq!(v.p_hat(), 3);
    assert!((v.sigma_hat() - 1.0).abs() < 0.1);
    for (est, truth) in v.alpha_hats().iter().zip([10.0, 6.0, 4.0]) {
        assert!((est / truth - 1.0).abs() < 0.2, "{est} vs {truth}");
    }
    assert!(v.lambda_minus() < v.lambda_plus());
    assert_eq!(v.eigenvalues().len(), 360);
}

#[test]
fn rejects_bad_input() {
    assert!(toeplitz_view(1.2, 64, false).is_err());
    assert!(toeplitz_view(0.5, MAX_DIM + 1, false).is_err());
    assert!(ratio_view(0.5, 1, 10, 0).is_err());
    assert!(whiten_view(0.5, 100, 3, &[], 0).is_err());
    assert!(whiten_view(0.5, 100, 50, &[0.5], 0).is_err());
}
