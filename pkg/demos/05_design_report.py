"""The full design report, and two what-if variations of the default scenario."""
# %%
from atomchip.config import ScenarioConfig
from atomchip.report import ReportStageError, assemble_report

cfg = ScenarioConfig.default()
report = assemble_report(cfg)
print(report.to_text())

# %% Mirrors of 90% reflectivity on the guides.
mirrored = assemble_report(cfg.with_value("probe.mirror_reflectivity", 0.9), stages=["detection"])
row = mirrored["detection.snr_single_atom"]
print(f"SNR with mirrors: {row.value:.2f} ({row.status})")

# %% Trap light on the wrong side of the D lines.
try:
    assemble_report(cfg.with_value("dipole_trap.wavelength", 760))
except ReportStageError as exc:
    print(exc)
