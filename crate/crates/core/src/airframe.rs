//! Legitimate-side signal generation: frame geometry, QPSK mapping, Haar
//! pilots, synthetic Rayleigh channels, and the composed receive matrix with
//! exact SNR and jammer-power scaling.

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::{complex_gaussian, complex_gaussian_matrix, fast_mul, C64, CMat};

/// Bit matrix; entries are 0 or 1.
pub type BitMat = nalgebra::DMatrix<u8>;

pub const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Frame geometry: antenna/user counts and the column-index partition of one
/// frame into jammer-training, pilot, and data positions.
///
/// The jammer-training columns (the receiver listens while the users stay
/// silent) are spread evenly over the frame; pilots and data fill the
/// remaining positions in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameLayout {
    bs_antennas: usize,
    users: usize,
    jammer_antennas: usize,
    pilot_len: usize,
    data_len: usize,
    training_len: usize,
    training_cols: Vec<usize>,
    pilot_cols: Vec<usize>,
    data_cols: Vec<usize>,
}

impl FrameLayout {
    pub fn new(
        bs_antennas: usize,
        users: usize,
        jammer_antennas: usize,
        pilot_len: usize,
        data_len: usize,
        training_len: usize,
    ) -> Result<Self> {
        if bs_antennas < users + jammer_antennas {
            return Err(Error::InvalidConfig {
                what: format!(
                    "bs_antennas ({bs_antennas}) must be >= users + jammer antennas ({})",
                    users + jammer_antennas
                ),
            });
        }
        if users == 0 || data_len == 0 {
            return Err(Error::InvalidConfig {
                what: "users and data_len must be positive".into(),
            });
        }
        if pilot_len < users {
            return Err(Error::InvalidConfig {
                what: format!("pilot_len ({pilot_len}) must be >= users ({users})"),
            });
        }
        let frame_len = training_len + pilot_len + data_len;
        // evenly distributed training columns: round(l*L/R) for l = 0..R-1
        let training_cols: Vec<usize> = (0..training_len)
            .map(|l| ((l * frame_len) as f64 / training_len as f64).round() as usize)
            .collect();
        debug_assert!(training_cols.windows(2).all(|w| w[0] < w[1]));
        let mut rest = (0..frame_len).filter(|c| !training_cols.contains(c));
        let pilot_cols: Vec<usize> = rest.by_ref().take(pilot_len).collect();
        let data_cols: Vec<usize> = rest.collect();
        debug_assert_eq!(data_cols.len(), data_len);
        Ok(FrameLayout {
            bs_antennas,
            users,
            jammer_antennas,
            pilot_len,
            data_len,
            training_len,
            training_cols,
            pilot_cols,
            data_cols,
        })
    }

    pub fn bs_antennas(&self) -> usize {
        self.bs_antennas
    }
    pub fn users(&self) -> usize {
        self.users
    }
    pub fn jammer_antennas(&self) -> usize {
        self.jammer_antennas
    }
    pub fn pilot_len(&self) -> usize {
        self.pilot_len
    }
    pub fn data_len(&self) -> usize {
        self.data_len
    }
    pub fn training_len(&self) -> usize {
        self.training_len
    }
    pub fn frame_len(&self) -> usize {
        self.training_len + self.pilot_len + self.data_len
    }
    /// Frame columns reserved for jammer training (users silent).
    pub fn training_cols(&self) -> &[usize] {
        &self.training_cols
    }
    pub fn pilot_cols(&self) -> &[usize] {
        &self.pilot_cols
    }
    pub fn data_cols(&self) -> &[usize] {
        &self.data_cols
    }
}

/// Ground truth of one simulated frame: channels, noise level, and the
/// targeted jammer/noise power ratios.
#[derive(Debug, Clone)]
pub struct Scene {
    pub ue_channel: CMat,
    pub jammer_channel: CMat,
    pub noise_var: f64,
    pub rho_db: f64,
    pub snr_db: f64,
}

/// All transmit-side and receive-side matrices of one synthesized frame.
#[derive(Debug, Clone)]
pub struct FrameSignals {
    /// Pilot matrix `S_T` (users x pilot_len).
    pub pilots: CMat,
    /// Data matrix `S_D` (users x data_len), entries in the QPSK set.
    pub data_symbols: CMat,
    /// Jammer transmit matrix `W` over the whole frame (I x L), post scaling.
    pub jammer_tx: CMat,
    /// Receiver noise (B x L).
    pub noise: CMat,
    /// User transmit matrix `X` over the whole frame (users x L); zero on
    /// training columns.
    pub ue_tx: CMat,
    /// Receive matrix `Y = H X + J W + N` (B x L).
    pub rx: CMat,
}

fn gather_cols(m: &CMat, cols: &[usize]) -> CMat {
    let mut out = CMat::zeros(m.nrows(), cols.len());
    for (k, &c) in cols.iter().enumerate() {
        out.set_column(k, &m.column(c));
    }
    out
}

impl FrameSignals {
    /// Receive columns of the jammer-training period, `Y_J` (B x R).
    pub fn rx_training(&self, layout: &FrameLayout) -> CMat {
        gather_cols(&self.rx, layout.training_cols())
    }
    /// Receive columns of the pilot phase, `Y_T` (B x T).
    pub fn rx_pilot(&self, layout: &FrameLayout) -> CMat {
        gather_cols(&self.rx, layout.pilot_cols())
    }
    /// Receive columns of the data phase, `Y_D` (B x D).
    pub fn rx_data(&self, layout: &FrameLayout) -> CMat {
        gather_cols(&self.rx, layout.data_cols())
    }
    /// Jammer transmit columns of the pilot phase, `W_T` (I x T).
    pub fn jammer_tx_pilot(&self, layout: &FrameLayout) -> CMat {
        gather_cols(&self.jammer_tx, layout.pilot_cols())
    }
    /// Jammer transmit columns of the data phase, `W_D` (I x D).
    pub fn jammer_tx_data(&self, layout: &FrameLayout) -> CMat {
        gather_cols(&self.jammer_tx, layout.data_cols())
    }
}

/// One QPSK constellation point from a Gray-coded bit pair:
/// `(b0, b1) -> ((1-2*b0) + i*(1-2*b1)) / sqrt(2)`.
pub fn qpsk_point(b0: u8, b1: u8) -> C64 {
    debug_assert!(b0 <= 1 && b1 <= 1);
    Complex::new(
        (1.0 - 2.0 * b0 as f64) * SQRT_HALF,
        (1.0 - 2.0 * b1 as f64) * SQRT_HALF,
    )
}

/// The four QPSK constellation points.
pub fn qpsk_constellation() -> [C64; 4] {
    [
        qpsk_point(0, 0),
        qpsk_point(0, 1),
        qpsk_point(1, 0),
        qpsk_point(1, 1),
    ]
}

/// Map a `users x 2*data_len` bit matrix to a `users x data_len` QPSK symbol
/// matrix (two bits per symbol, Gray mapping).
pub fn qpsk_modulate(bits: &BitMat) -> CMat {
    assert!(bits.ncols() % 2 == 0, "need an even number of bit columns");
    let users = bits.nrows();
    let data_len = bits.ncols() / 2;
    CMat::from_fn(users, data_len, |u, k| {
        qpsk_point(bits[(u, 2 * k)], bits[(u, 2 * k + 1)])
    })
}

/// Hard minimum-distance bit decision per entry: `b0 = (Re < 0)`,
/// `b1 = (Im < 0)`. The decision-boundary tie resolves toward bit 0.
pub fn qpsk_demodulate(symbols: &CMat) -> BitMat {
    let mut bits = BitMat::zeros(symbols.nrows(), 2 * symbols.ncols());
    for u in 0..symbols.nrows() {
        for k in 0..symbols.ncols() {
            let z = symbols[(u, k)];
            bits[(u, 2 * k)] = (z.re < 0.0) as u8;
            bits[(u, 2 * k + 1)] = (z.im < 0.0) as u8;
        }
    }
    bits
}

/// Uniformly random bit matrix.
pub fn random_bits<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> BitMat {
    BitMat::from_fn(rows, cols, |_, _| rng.gen_range(0..2u8))
}

/// Square pilot matrix drawn from the power-normalized Haar measure:
/// QR of a complex Gaussian matrix, phase-corrected so the R diagonal is
/// real-positive, then scaled by `sqrt(U)` so each row has average symbol
/// power one (`S_T * S_T^H = U * I`).
pub fn haar_pilots<R: Rng + ?Sized>(users: usize, pilot_len: usize, rng: &mut R) -> Result<CMat> {
    if pilot_len != users {
        return Err(Error::UnsupportedConfig {
            what: format!(
                "haar pilots are defined for square pilot matrices (T = U), got T={pilot_len}, U={users}"
            ),
        });
    }
    let g = complex_gaussian_matrix(users, users, rng);
    let qr = g.qr();
    let r_diag = qr.r().diagonal().into_owned();
    let mut q = qr.q();
    for (j, d) in r_diag.iter().enumerate() {
        let mag = d.norm();
        let phase = if mag > 0.0 {
            d / C64::new(mag, 0.0)
        } else {
            C64::new(1.0, 0.0)
        };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    Ok(q * C64::new((users as f64).sqrt(), 0.0))
}

/// Per-UE amplitude gains: `20*log10(g) ~ Uniform[-3, 3]` dB.
fn power_control_gain<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let db = rng.gen_range(-3.0..=3.0);
    10f64.powf(db / 20.0)
}

/// Synthetic Rayleigh channels: UE columns i.i.d. `CN(0, I_B)` scaled by a
/// per-UE power-control gain within +/-3 dB, jammer columns i.i.d.
/// `CN(0, I_B)`. Redraws until `[H, J]` is numerically full rank.
pub fn gen_channel<R: Rng + ?Sized>(layout: &FrameLayout, rng: &mut R) -> Result<(CMat, CMat)> {
    const MAX_ATTEMPTS: usize = 100;
    let b = layout.bs_antennas();
    for _ in 0..MAX_ATTEMPTS {
        let mut ue = complex_gaussian_matrix(b, layout.users(), rng);
        for u in 0..layout.users() {
            let gain = C64::new(power_control_gain(rng), 0.0);
            let mut col = ue.column_mut(u);
            col *= gain;
        }
        let jammer = complex_gaussian_matrix(b, layout.jammer_antennas(), rng);
        if layout.jammer_antennas() == 0 {
            return Ok((ue, jammer));
        }
        let mut stacked = CMat::zeros(b, layout.users() + layout.jammer_antennas());
        stacked.columns_mut(0, layout.users()).copy_from(&ue);
        stacked
            .columns_mut(layout.users(), layout.jammer_antennas())
            .copy_from(&jammer);
        let sv = stacked.singular_values();
        let smax = sv.iter().cloned().fold(0.0_f64, f64::max);
        let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        if smin > 1e-6 * smax {
            return Ok((ue, jammer));
        }
    }
    Err(Error::ChannelGeneration {
        attempts: MAX_ATTEMPTS,
    })
}

/// Noise variance hitting an exact SNR target: `N0 = |H|_F^2 / (B * 10^(snr/10))`.
pub fn scale_noise_for_snr(ue_channel: &CMat, snr_db: f64) -> f64 {
    ue_channel.norm_squared() / (ue_channel.nrows() as f64 * 10f64.powf(snr_db / 10.0))
}

/// Result of deterministic jammer-power scaling.
#[derive(Debug, Clone)]
pub struct ScaledJammerTx {
    pub jammer_tx: CMat,
    /// True when the waveform carries no energy, making the power ratio
    /// inapplicable; the waveform is then returned unchanged.
    pub silent: bool,
}

/// Deterministically scale the jammer waveform so the frame-average receive
/// interference power hits the target ratio exactly:
/// `(1/L) |J * (c*W)|_F^2 = 10^(rho/10) * (1/U) |H|_F^2`.
pub fn scale_jammer_for_rho(
    jammer_channel: &CMat,
    jammer_tx: &CMat,
    ue_channel: &CMat,
    rho_db: f64,
    frame_len: usize,
) -> ScaledJammerTx {
    let rx_energy = fast_mul(jammer_channel, jammer_tx).norm_squared();
    if rx_energy <= f64::MIN_POSITIVE {
        return ScaledJammerTx {
            jammer_tx: jammer_tx.clone(),
            silent: true,
        };
    }
    let users = ue_channel.ncols() as f64;
    let target = 10f64.powf(rho_db / 10.0) * ue_channel.norm_squared() / users;
    let scale = (target * frame_len as f64 / rx_energy).sqrt();
    ScaledJammerTx {
        jammer_tx: jammer_tx * C64::new(scale, 0.0),
        silent: false,
    }
}

/// Assemble one frame: place pilots/data into the user transmit matrix
/// (zeros at training columns), draw the noise at variance `noise_var` per
/// complex entry, and compose `Y = H X + J W + N`.
pub fn synthesize_rx<R: Rng + ?Sized>(
    layout: &FrameLayout,
    scene: &Scene,
    pilots: &CMat,
    data_symbols: &CMat,
    jammer_tx: &CMat,
    rng: &mut R,
) -> Result<FrameSignals> {
    let b = layout.bs_antennas();
    let users = layout.users();
    let frame_len = layout.frame_len();
    if pilots.shape() != (users, layout.pilot_len())
        || data_symbols.shape() != (users, layout.data_len())
        || jammer_tx.shape() != (layout.jammer_antennas(), frame_len)
        || scene.ue_channel.shape() != (b, users)
        || scene.jammer_channel.shape() != (b, layout.jammer_antennas())
    {
        return Err(Error::Dimension {
            what: "synthesize_rx inputs do not match the frame layout",
        });
    }
    let mut ue_tx = CMat::zeros(users, frame_len);
    for (k, &c) in layout.pilot_cols().iter().enumerate() {
        ue_tx.set_column(c, &pilots.column(k));
    }
    for (k, &c) in layout.data_cols().iter().enumerate() {
        ue_tx.set_column(c, &data_symbols.column(k));
    }
    let sigma = scene.noise_var.sqrt();
    let noise = CMat::from_fn(b, frame_len, |_, _| {
        complex_gaussian(rng) * C64::new(sigma, 0.0)
    });
    let mut rx = fast_mul(&scene.ue_channel, &ue_tx);
    rx += fast_mul(&scene.jammer_channel, jammer_tx);
    rx += &noise;
    Ok(FrameSignals {
        pilots: pilots.clone(),
        data_symbols: data_symbols.clone(),
        jammer_tx: jammer_tx.clone(),
        noise,
        ue_tx,
        rx,
    })
}
