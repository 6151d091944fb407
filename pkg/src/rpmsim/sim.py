"""Day-by-day cohort simulation: profiles, trajectories, triage, admissions.

Everything is keyed off named substreams of the run seed
(``Random(f"{seed}:day:{patient}:{date}")`` and friends) with a fixed draw
order per patient-day, so a rerun (or a counterfactual rerun with one
response changed) consumes exactly the same random numbers for the parts
that did not change.
"""

from __future__ import annotations

import copy
from collections import deque
from dataclasses import dataclass, field
from datetime import date, datetime, time, timedelta
from random import Random
from typing import Optional

from .alerts import AlertRuleParams, evaluate
from .config import Mode, SimulationConfig
from .domain import (
    Admission,
    Alert,
    AlertStatus,
    Cohort,
    ConflictError,
    Consultation,
    Channel,
    DocStyle,
    Experience,
    HcpProfile,
    HcpRole,
    HomeSupport,
    LedgerKind,
    Measurement,
    PatientProfile,
    ResponseAction,
    StabilityClass,
    TruthLedgerEntry,
    Vital,
    VITAL_ORDER,
    days_until_duty,
    parse_id_seq,
    quantize_vital,
    VITAL_FLOORS,
)
from .policy import (
    DecisionContext,
    NoteEvent,
    apply_response,
    assign,
    decide,
    next_record_id,
    render_note,
)

PATIENT_FIRST_NAMES = (
    "Jan", "Annie", "Willem", "Greet", "Henk", "Marloes", "Piet", "Truus",
    "Kees", "Dora", "Bram", "Sien", "Gerrit", "Nel", "Joop", "Riet",
)
PATIENT_LAST_NAMES = (
    "de Vries", "Jansen", "van Dijk", "Bakker", "Visser", "Smit",
    "Meijer", "de Boer", "Mulder", "Bos", "Peters", "Hendriks",
)
HCP_FIRST_NAMES = ("Anke", "Joris", "Femke", "Ruben", "Lotte", "Daan", "Sanne", "Thijs")
HCP_LAST_NAMES = ("Claes", "Vermeer", "de Groot", "van Leeuwen", "Smulders", "Dekker")

COMORBIDITIES = (
    "type 2 diabetes", "atrial fibrillation", "COPD",
    "chronic kidney disease", "hypertension", "anemia", "osteoarthritis",
)

ADMISSION_REASONS = (
    "decompensated heart failure", "fluid overload",
    "rhythm disturbance work-up", "worsening shortness of breath",
    "medication rebalancing",
)

# Patient-voice comments anchored to what the value is doing.
SITUATED_COMMENTS: dict[Vital, dict[str, tuple[str, ...]]] = {
    Vital.WEIGHT: {
        "up": ("Feeling bloated since yesterday",
               "Ankles a bit swollen this morning",
               "Ate quite salty food at the party",
               "Rings feel tight on my fingers"),
        "down": ("Not much appetite this week",
                 "Skipped dinner last night",
                 "Stomach was upset yesterday"),
        "none": ("Measured right after breakfast",
                 "Same scale as always",
                 "Feeling fine today"),
    },
    Vital.SYSTOLIC_BP: {
        "up": ("Bit of a headache this morning",
               "Stressful week with the family",
               "Forgot my evening pills yesterday"),
        "down": ("Feeling a little dizzy when standing",
                 "Took it easy all morning"),
        "none": ("Measured after sitting quietly",
                 "Cuff on the left arm as usual"),
    },
    Vital.DIASTOLIC_BP: {
        "up": ("Head feels heavy today",
               "Busy and tense day yesterday"),
        "down": ("A bit lightheaded after the stairs",),
        "none": ("Second reading of the morning",
                 "All calm before measuring"),
    },
    Vital.HEART_RATE: {
        "up": ("Heart felt fluttery during the night",
               "Walked up the stairs just before measuring",
               "Poor sleep and too much coffee"),
        "down": ("Very sluggish this morning",
                 "Slept longer than usual"),
        "none": ("Rested five minutes before measuring",
                 "Nothing special to report"),
    },
}

# Extra voice for patients managing with little support at home.
LOW_SUPPORT_COMMENTS = (
    "Managing on my own this week",
    "Hard to keep everything organized alone",
    "Neighbour helped me with the device",
)

IRRELEVANT_COMMENTS = (
    "Sent from my tablet",
    "Is this app supposed to beep twice?",
    "Battery icon was red during measurement",
    "Lovely weather out today",
    "Grandchildren are visiting this weekend",
    "Please ignore the previous entry",
    "Typed this by accident",
    "The nurse said I should write something here",
)

# Duty rosters cycle through these patterns; the first two together cover
# all seven weekdays, so any roster of two or more has full coverage.
DUTY_PATTERNS: tuple[tuple[int, ...], ...] = (
    (0, 1, 2, 3, 4),
    (0, 2, 5, 6),
    (0, 1, 2, 3, 4),
    (3, 4, 5),
    (1, 2, 6),
    (0, 2, 4, 6),
)

# Baseline-to-threshold distance per vital, scaled ±15% per patient side.
THRESHOLD_MARGINS: dict[Vital, float] = {
    Vital.WEIGHT: 2.5,
    Vital.SYSTOLIC_BP: 12.0,
    Vital.DIASTOLIC_BP: 9.0,
    Vital.HEART_RATE: 13.0,
}

ADHERENCE_RANGES: dict[StabilityClass, tuple[float, float]] = {
    StabilityClass.STABLE: (0.85, 0.98),
    StabilityClass.FLUCTUATING: (0.62, 0.88),
    StabilityClass.SPIKY: (0.72, 0.94),
}


def generate_profiles(config: SimulationConfig) -> tuple[list[PatientProfile], list[HcpProfile]]:
    """Draw the roster; same config (seed included) gives identical output."""
    rng = Random(f"{config.seed}:profiles")
    patients: list[PatientProfile] = []
    for i in range(config.n_patients):
        stability = (StabilityClass.STABLE, StabilityClass.FLUCTUATING,
                     StabilityClass.SPIKY)[i % 3]
        first = rng.choice(PATIENT_FIRST_NAMES)
        last = rng.choice(PATIENT_LAST_NAMES)
        age = rng.randint(55, 88)
        comorbidities = tuple(rng.sample(COMORBIDITIES, rng.randint(1, 3)))
        support = HomeSupport.LOW if rng.random() < 0.3 else HomeSupport.HIGH
        enrollment = config.start_date - timedelta(days=rng.randint(20, 90))
        lo, hi = ADHERENCE_RANGES[stability]
        adherence = round(rng.uniform(lo, hi), 2)
        baselines = {
            Vital.WEIGHT: round(rng.uniform(58.0, 98.0), 1),
            Vital.SYSTOLIC_BP: float(rng.randint(112, 148)),
            Vital.DIASTOLIC_BP: float(rng.randint(66, 92)),
            Vital.HEART_RATE: float(rng.randint(58, 88)),
        }
        thresholds = {}
        for vital in VITAL_ORDER:
            margin = THRESHOLD_MARGINS[vital]
            low = quantize_vital(vital, baselines[vital] - margin * rng.uniform(0.85, 1.15))
            high = quantize_vital(vital, baselines[vital] + margin * rng.uniform(0.85, 1.15))
            thresholds[vital] = (low, high)
        patients.append(PatientProfile(
            id=f"pt-{i + 1:03d}",
            display_name=f"{first} {last}",
            age=age,
            comorbidities=comorbidities,
            stability_class=stability,
            adherence=adherence,
            home_support=support,
            enrollment_date=enrollment,
            baselines=baselines,
            thresholds=thresholds,
        ))

    hcps: list[HcpProfile] = []
    for i in range(config.n_hcps):
        role = HcpRole.PHYSICIAN if i % 3 == 2 else HcpRole.NURSE
        if role is HcpRole.PHYSICIAN:
            name = f"Dr. {rng.choice(HCP_LAST_NAMES)}"
        else:
            name = f"Nurse {rng.choice(HCP_FIRST_NAMES)}"
        experience = (Experience.EXPERIENCED, Experience.NOVICE)[i % 2]
        if experience is Experience.EXPERIENCED:
            confidence = round(rng.uniform(0.55, 0.95), 2)
        else:
            confidence = round(rng.uniform(0.28, 0.72), 2)
        style = DocStyle.TERSE if rng.random() < 0.5 else DocStyle.VERBOSE
        hcps.append(HcpProfile(
            id=f"hcp-{i + 1:02d}",
            display_name=name,
            role=role,
            experience=experience,
            confidence=confidence,
            doc_style=style,
            duty_days=tuple(sorted(DUTY_PATTERNS[i % len(DUTY_PATTERNS)])),
        ))
    return patients, hcps


@dataclass
class SpikeEvent:
    """Transient upward excursion on one vital, active on [start, end)."""

    vital: Vital
    start: date
    end: date
    magnitude: float


def spike_schedule(config: SimulationConfig, profile: PatientProfile) -> list[SpikeEvent]:
    """Precomputed spike events for one patient; empty unless spiky."""
    if profile.stability_class is not StabilityClass.SPIKY:
        return []
    if config.spike.rate_per_30_days <= 0 or config.duration_days <= 0:
        return []
    rng = Random(f"{config.seed}:spikes:{profile.id}")
    events: list[SpikeEvent] = []
    t = 0.0
    while True:
        t += rng.expovariate(config.spike.rate_per_30_days / 30.0)
        if t >= config.duration_days:
            break
        start = config.start_date + timedelta(days=int(t))
        vital = rng.choice(VITAL_ORDER)
        magnitude = round(rng.uniform(*config.spike.magnitude_range)
                          * config.abrupt_delta[vital], 2)
        duration = rng.randint(*config.spike.duration_range_days)
        events.append(SpikeEvent(
            vital=vital, start=start,
            end=start + timedelta(days=duration),
            magnitude=magnitude,
        ))
    return events


@dataclass
class PatientState:
    """Per-patient working state derived from the cohort and seed."""

    profile: PatientProfile
    config: SimulationConfig
    spikes: list[SpikeEvent]
    med_changes: list = field(default_factory=list)
    recent: dict[Vital, deque] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.recent:
            w = max(self.config.abrupt_window_days, 1)
            self.recent = {v: deque(maxlen=w) for v in VITAL_ORDER}


def next_value(state: PatientState, vital: Vital, on: date,
               noise_draw: float) -> float:
    """Baseline plus ramped medication effects, active spikes, and noise."""
    total = state.profile.baselines[vital]
    for mc in state.med_changes:
        eff = mc.effect
        if eff.vital is not vital:
            continue
        days_since = (on - mc.timestamp.date()).days
        if days_since <= 0:
            continue
        factor = min(days_since / eff.onset_days, 1.0)
        step = factor * eff.magnitude
        total += step if eff.direction.value == "up" else -step
    for sp in state.spikes:
        if sp.vital is vital and sp.start <= on < sp.end:
            total += sp.magnitude
    amp = state.config.noise_amplitude[state.profile.stability_class][vital]
    total += noise_draw * amp
    return quantize_vital(vital, max(total, VITAL_FLOORS[vital]))


@dataclass
class DayReport:
    """What one `Simulation.run` call did."""

    days_advanced: int
    new_measurements: int
    new_alerts: int
    clock: Optional[date]
    open_alerts: int
    complete: bool


class Simulation:
    """Owns one cohort and advances it day by day.

    Batch mode runs to the horizon in one `run()` call; interactive mode
    stops at the end of any day that leaves alerts open, and refuses to
    advance again until they are all responded to.
    """

    def __init__(self, config: SimulationConfig,
                 cohort: Optional[Cohort] = None) -> None:
        config = copy.deepcopy(config)
        config.require_valid()
        self.config = config
        if cohort is None:
            patients, hcps = generate_profiles(config)
            self.cohort = Cohort(config=config, patients=patients, hcps=hcps)
            self._day_index = 0
            self._measurement_seq = 0
            self._alert_seq = 0
        else:
            cohort.config = config
            self.cohort = cohort
            if cohort.clock is None:
                self._day_index = 0
            else:
                self._day_index = (cohort.clock - config.start_date).days + 1
            self._measurement_seq = self._max_seq(
                m.id for m in cohort.measurements
                if not m.id.startswith("m-dup-"))
            self._alert_seq = self._max_seq(a.id for a in cohort.alerts)
        self._params = AlertRuleParams.from_config(config)
        self._meas_by_id = {m.id: m for m in self.cohort.measurements}
        self._states = [
            PatientState(
                profile=p, config=config,
                spikes=spike_schedule(config, p),
            )
            for p in self.cohort.patients
        ]
        self._rebuild_recent()

    @classmethod
    def from_cohort(cls, cohort: Cohort) -> "Simulation":
        """Adopt an existing cohort (imported bundle) and continue from its clock."""
        return cls(cohort.config, cohort=cohort)

    @staticmethod
    def _max_seq(ids) -> int:
        seq = 0
        for entity_id in ids:
            try:
                seq = max(seq, parse_id_seq(entity_id))
            except ValueError:
                continue
        return seq

    def _rebuild_recent(self) -> None:
        dup = self.cohort.injected_duplicate_ids()
        per_key: dict[tuple[str, Vital], list[Measurement]] = {}
        for m in self.cohort.measurements:
            if m.id in dup:
                continue
            per_key.setdefault((m.patient_id, m.vital), []).append(m)
        for state in self._states:
            for vital in VITAL_ORDER:
                rows = sorted(per_key.get((state.profile.id, vital), ()),
                              key=lambda m: (m.timestamp, m.id))
                for m in rows[-state.recent[vital].maxlen:]:
                    state.recent[vital].append(m)
            state.med_changes = [
                mc for mc in self.cohort.medication_changes
                if mc.patient_id == state.profile.id
            ]

    @property
    def complete(self) -> bool:
        return self._day_index >= self.config.duration_days

    def open_alert_ids(self) -> list[str]:
        return sorted(a.id for a in self.cohort.alerts
                      if a.status is AlertStatus.OPEN)

    def open_alert_count(self) -> int:
        return sum(1 for a in self.cohort.alerts
                   if a.status is AlertStatus.OPEN)

    def _current_date(self) -> date:
        return self.config.start_date + timedelta(days=self._day_index)

    def run(self, max_days: Optional[int] = None) -> DayReport:
        """Advance until complete, `max_days` spent, or an interactive halt.

        In interactive mode a call with alerts already pending raises
        ConflictError: the queue must be worked down first.
        """
        if (self.config.mode is Mode.INTERACTIVE and not self.complete
                and self.open_alert_count() > 0):
            pending = ", ".join(self.open_alert_ids())
            raise ConflictError(f"open alerts pending response: {pending}")
        meas0 = len(self.cohort.measurements)
        alerts0 = len(self.cohort.alerts)
        days = 0
        while not self.complete and (max_days is None or days < max_days):
            self._run_day(self._current_date())
            days += 1
            if (self.config.mode is Mode.INTERACTIVE
                    and self.open_alert_count() > 0):
                break
        return DayReport(
            days_advanced=days,
            new_measurements=len(self.cohort.measurements) - meas0,
            new_alerts=len(self.cohort.alerts) - alerts0,
            clock=self.cohort.clock,
            open_alerts=self.open_alert_count(),
            complete=self.complete,
        )

    def submit_response(self, alert_id: str, hcp_id: str,
                        action: ResponseAction,
                        note: Optional[str] = None) -> None:
        """Record a human response at the current clock date (interactive)."""
        on = self.cohort.clock if self.cohort.clock is not None \
            else self.config.start_date
        apply_response(self.cohort, alert_id, hcp_id, action, on, note=note)
        self._refresh_meds()

    def _refresh_meds(self) -> None:
        for state in self._states:
            state.med_changes = [
                mc for mc in self.cohort.medication_changes
                if mc.patient_id == state.profile.id
            ]

    # -- one simulated day ---------------------------------------------------

    def _run_day(self, on: date) -> None:
        self._admission_visits(on)
        for state in self._states:
            self._patient_day(state, on)
        if self.config.mode is Mode.BATCH:
            self._triage(on)
        self._open_admissions(on)
        self.cohort.clock = on
        self._day_index += 1

    def _patient_day(self, state: PatientState, on: date) -> None:
        profile = state.profile
        rng = Random(f"{self.config.seed}:day:{profile.id}:{on.isoformat()}")
        # Fixed draw order, consumed unconditionally: reruns with different
        # responses see identical noise.
        u_submit = rng.random()
        minute = rng.randrange(120)
        noise = [rng.gauss(0.0, 1.0) for _ in VITAL_ORDER]
        comment_u = [rng.random() for _ in VITAL_ORDER]
        comment_pick = [rng.random() for _ in VITAL_ORDER]

        state.med_changes = [
            mc for mc in self.cohort.medication_changes
            if mc.patient_id == profile.id
        ]
        p_submit = profile.adherence
        if self.cohort.is_admitted(profile.id, on):
            p_submit *= self.config.admission_adherence_multiplier
        if u_submit >= p_submit:
            return

        session = datetime.combine(on, time(7, 30)) + timedelta(minutes=minute)
        for idx, vital in enumerate(VITAL_ORDER):
            value = next_value(state, vital, on, noise[idx])
            self._measurement_seq += 1
            m = Measurement(
                id=f"m-{self._measurement_seq:07d}",
                patient_id=profile.id,
                timestamp=session + timedelta(seconds=20 * idx),
                vital=vital,
                value=value,
            )
            low, high = profile.thresholds[vital]
            direction = "up" if value > high else "down" if value < low else "none"
            p_comment = self.config.messiness.p_situated_comment
            if direction != "none":
                p_comment = min(p_comment * 3.0, 1.0)
            if comment_u[idx] < p_comment:
                pool = SITUATED_COMMENTS[vital][direction]
                if profile.home_support is HomeSupport.LOW:
                    pool = pool + LOW_SUPPORT_COMMENTS
                m.comment = pool[int(comment_pick[idx] * len(pool))]

            self.cohort.measurements.append(m)
            self._meas_by_id[m.id] = m

            alert = evaluate(m, profile, list(state.recent[vital]),
                             self._params,
                             alert_id=f"al-{self._alert_seq + 1:05d}")
            if alert is not None:
                self._alert_seq += 1
                self.cohort.alerts.append(alert)
            state.recent[vital].append(m)

    # -- batch triage --------------------------------------------------------

    def _repeat_count(self, alert: Alert, on: date) -> int:
        vital = self._meas_by_id[alert.measurement_id].vital
        since = on - timedelta(days=6)
        count = 0
        for a in self.cohort.alerts:
            if a.patient_id != alert.patient_id:
                continue
            created = a.created_at.date()
            if not since <= created <= on:
                continue
            if self._meas_by_id[a.measurement_id].vital is vital:
                count += 1
        return count

    def _triage(self, on: date) -> None:
        pending = sorted(
            (a for a in self.cohort.alerts if a.status is AlertStatus.OPEN),
            key=lambda a: (a.created_at, a.id),
        )
        for alert in pending:
            while alert.status is AlertStatus.OPEN:
                if alert.assigned_hcp_id is not None:
                    hcp = self.cohort.hcp_by_id(alert.assigned_hcp_id)
                    if on.weekday() not in hcp.duty_days:
                        break  # waits for the assignee's duty day
                else:
                    hcp_id = assign(alert, self.cohort.hcps, on)
                    if hcp_id is None:
                        break  # nobody on duty today
                    alert.assigned_hcp_id = hcp_id
                    hcp = self.cohort.hcp_by_id(hcp_id)
                patient = self.cohort.patient_by_id(alert.patient_id)
                ctx = DecisionContext(
                    alert=alert,
                    repeat_count=self._repeat_count(alert, on),
                    weekday=on.weekday(),
                    days_until_next_duty=days_until_duty(hcp.duty_days, on),
                    stability_class=patient.stability_class,
                    hcp=hcp,
                )
                action = decide(ctx)
                if action is ResponseAction.CONTACT_COLLEAGUE and any(
                        r.alert_id == alert.id
                        and r.action is ResponseAction.CONTACT_COLLEAGUE
                        for r in self.cohort.responses):
                    # One hand-off per alert; the second opinion must land.
                    action = ResponseAction.CALL_PATIENT
                apply_response(self.cohort, alert.id, hcp.id, action, on)
        self._refresh_meds()

    # -- admissions ----------------------------------------------------------

    def _open_admissions(self, on: date) -> None:
        policy = self.config.admission_policy
        final = self.config.final_date
        if final is None or on >= final:
            return
        since = on - timedelta(days=policy.window_days - 1)
        for state in self._states:
            pid = state.profile.id
            if self.cohort.is_admitted(pid, on):
                continue
            last_end: Optional[date] = None
            for adm in self.cohort.admissions:
                if adm.patient_id == pid and (last_end is None or adm.end > last_end):
                    last_end = adm.end
            highs = 0
            for a in self.cohort.alerts:
                if a.patient_id != pid or a.severity.value != "high":
                    continue
                created = a.created_at.date()
                if created < since or created > on:
                    continue
                if last_end is not None and created < last_end:
                    continue
                highs += 1
            if highs < policy.trigger_high_alerts:
                continue
            rng = Random(f"{self.config.seed}:admission:{pid}:{on.isoformat()}")
            stay = rng.randint(*policy.stay_days_range)
            reason = rng.choice(ADMISSION_REASONS)
            start = on + timedelta(days=1)
            end = min(start + timedelta(days=stay), final + timedelta(days=1))
            self.cohort.admissions.append(Admission(
                id=next_record_id(self.cohort.admissions, "ad-", 3),
                patient_id=pid,
                start=start,
                end=end,
                reason=reason,
            ))

    def _visit_date(self, adm: Admission) -> Optional[date]:
        """First day of the stay on which anyone is on duty."""
        for k in range((adm.end - adm.start).days):
            day = adm.start + timedelta(days=k)
            if any(day.weekday() in h.duty_days for h in self.cohort.hcps):
                return day
        return None

    def _admission_subject(self, adm: Admission) -> tuple[Vital, float]:
        """The reading the ward visit talks about: the latest pre-stay high alert."""
        best: Optional[Alert] = None
        for a in self.cohort.alerts:
            if a.patient_id != adm.patient_id or a.severity.value != "high":
                continue
            if a.created_at.date() >= adm.start:
                continue
            if best is None or (a.created_at, a.id) > (best.created_at, best.id):
                best = a
        if best is not None:
            m = self._meas_by_id.get(best.measurement_id)
            if m is not None:
                return m.vital, m.value
        profile = self.cohort.patient_by_id(adm.patient_id)
        return Vital.WEIGHT, profile.baselines[Vital.WEIGHT]

    def _admission_visits(self, on: date) -> None:
        for adm in self.cohort.admissions:
            if self._visit_date(adm) != on:
                continue
            on_duty = sorted(h.id for h in self.cohort.hcps
                             if on.weekday() in h.duty_days)
            hcp = self.cohort.hcp_by_id(
                on_duty[parse_id_seq(adm.id) % len(on_duty)])
            vital, value = self._admission_subject(adm)
            text = render_note(hcp, NoteEvent(
                kind="ward_consult", vital=vital, value=value,
            ))
            self.cohort.consultations.append(Consultation(
                id=next_record_id(self.cohort.consultations, "cs-", 4),
                patient_id=adm.patient_id,
                hcp_id=hcp.id,
                timestamp=datetime.combine(on, time(11, 0)),
                channel=Channel.IN_PERSON,
                text=text,
            ))


def simulate(config: SimulationConfig) -> Cohort:
    """Run a fresh cohort: batch to completion, interactive to the first halt."""
    sim = Simulation(config)
    sim.run()
    return sim.cohort


def inject_messiness(cohort: Cohort) -> Cohort:
    """Add export-time realism defects, recording each one in the ledger.

    No-op when the ledger is already populated.  Alerts and responses are
    never recomputed over injected rows; the clean history stays recoverable
    by filtering measurement ids through the ledger.
    """
    if cohort.truth_ledger:
        return cohort
    params = cohort.config.messiness
    rng = Random(f"{cohort.config.seed}:messiness")

    originals = list(cohort.measurements)
    dup_seq = 0
    for m in originals:
        if rng.random() < params.p_duplicate:
            dup_seq += 1
            dup = Measurement(
                id=f"m-dup-{dup_seq:06d}",
                patient_id=m.patient_id,
                timestamp=m.timestamp + timedelta(seconds=rng.randint(1, 120)),
                vital=m.vital,
                value=m.value,
                comment=m.comment,
            )
            cohort.measurements.append(dup)
            cohort.truth_ledger.append(TruthLedgerEntry(
                kind=LedgerKind.INJECTED_DUPLICATE,
                injected_id=dup.id,
                original_id=m.id,
            ))

    for m in list(cohort.measurements):
        if m.comment is None and rng.random() < params.p_irrelevant_comment:
            m.comment = rng.choice(IRRELEVANT_COMMENTS)
            cohort.truth_ledger.append(TruthLedgerEntry(
                kind=LedgerKind.INJECTED_IRRELEVANT_COMMENT,
                injected_id=m.id,
            ))
    return cohort
