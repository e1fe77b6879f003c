"""
Error floors from within-symbol channel variation
=================================================

On a Rayleigh channel whose gain decorrelates *during* a symbol, the
dechirped tone smears across FFT bins and errors persist no matter how
high the SNR is pushed.  The smear grows with the symbol length, so the
floor hits large spreading factors hardest -- the opposite of their
AWGN ranking.

The table below runs at 30 dB, where additive noise is negligible, and
sweeps the per-sample gain covariance q from block fading (q = 1, the
gain frozen over the whole frame) down to q = 0.99994.  Entries are
frame error rates for a 5-byte payload.
"""

from chirpsim import TrialPoint, estimate_fer

Q_VALUES = [1.0, 0.99999, 0.99997, 0.99995, 0.99994]
SPREADING_FACTORS = [7, 9, 12]
TRIALS = 2000

header = "     q    " + "".join(f"   S={sf:<5}" for sf in SPREADING_FACTORS)
print(header)
print("-" * len(header))
for q in Q_VALUES:
    cells = []
    for sf in SPREADING_FACTORS:
        point = TrialPoint(
            spreading_factor=sf, payload_bytes=5, covariance_q=q,
            snr_db=30.0, trials=TRIALS, master_seed=7100 + sf,
        )
        cells.append(f"{estimate_fer(point).fer:>9.4f}")
    print(f"{q:>9.5f} " + "".join(cells))

print()
print("q = 1 is error-free at this SNR; every smaller q leaves a floor,")
print("and the floor grows with the spreading factor because a longer")
print("symbol gives the channel more time to decorrelate mid-symbol.")
