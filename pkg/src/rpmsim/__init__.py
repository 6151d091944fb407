"""Deterministic synthetic remote-patient-monitoring cohort simulator."""

from .alerts import AlertRuleParams, alert_key, alert_keys, evaluate, scan
from .bundle import (
    BundleError,
    BundleFormatError,
    BundleValidationError,
    BundleVersionError,
    DatasetBundle,
    build_archive,
    cohorts_equal,
    export,
    import_bundle,
)
from .config import (
    AdmissionPolicy,
    ConfigError,
    MessinessParams,
    Mode,
    SimulationConfig,
    SpikeParams,
    config_from_dict,
    load_config_file,
)
from .domain import (
    Admission,
    Alert,
    AlertResponse,
    AlertRule,
    AlertStatus,
    Channel,
    Cohort,
    ConflictError,
    Consultation,
    DocStyle,
    EffectDirection,
    Experience,
    HcpProfile,
    HcpRole,
    HomeSupport,
    LedgerKind,
    Measurement,
    MedChange,
    MedicationChange,
    MedicationEffect,
    NotFoundError,
    PatientProfile,
    ResponseAction,
    Severity,
    StabilityClass,
    TimelineEvent,
    TruthLedgerEntry,
    VITAL_LABELS,
    VITAL_ORDER,
    VITAL_UNITS,
    ValidationReport,
    Violation,
    Vital,
    days_until_duty,
    format_vital,
    parse_id_seq,
    patient_timeline,
    quantize_vital,
    validate_cohort,
)
from .policy import (
    DecisionContext,
    MED_TABLE,
    NoteEvent,
    apply_response,
    assign,
    decide,
    render_note,
)
from .sim import (
    DayReport,
    PatientState,
    Simulation,
    SpikeEvent,
    generate_profiles,
    inject_messiness,
    next_value,
    simulate,
    spike_schedule,
)
from .stats import CohortStats, cohort_stats, patient_summary

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
