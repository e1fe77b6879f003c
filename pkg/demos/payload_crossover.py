"""
Where a large spreading factor stops paying off
===============================================

At S=12 a symbol is 32x longer than at S=7, buying processing gain on
a static channel.  On a fast-varying channel the long symbol is also
32x more exposed to mid-symbol decorrelation, and longer frames compound
whichever per-symbol rate is worse.  Sweeping the payload size makes the
trade visible: at one byte the large spreading factor wins, but as the
frame stretches its fading floor overtakes the small factor's noise
errors.

Fixed operating point: -8 dB, q = 0.99994 (fast channel).
"""

from chirpsim import TrialPoint, estimate_fer, symbol_count

PAYLOADS = [1, 5, 10, 20]
TRIALS = 2500

print(f"{'bytes':>5} {'symbols S7':>11} {'FER S7':>9} "
      f"{'symbols S12':>12} {'FER S12':>9}   better")
for payload in PAYLOADS:
    fer = {}
    for sf in (7, 12):
        point = TrialPoint(
            spreading_factor=sf, payload_bytes=payload,
            covariance_q=0.99994, snr_db=-8.0, trials=TRIALS,
            master_seed=7200 + payload,
        )
        fer[sf] = estimate_fer(point).fer
    better = "S12" if fer[12] < fer[7] else "S7"
    print(f"{payload:>5} {symbol_count(payload, 7):>11} {fer[7]:>9.4f} "
          f"{symbol_count(payload, 12):>12} {fer[12]:>9.4f}   {better}")

print()
print("The short-payload advantage of S=12 erodes as the frame grows;")
print("its per-symbol fading floor is ~20x the S=7 floor on this channel,")
print("so each added symbol costs it more.")
