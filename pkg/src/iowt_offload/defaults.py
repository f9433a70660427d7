"""Default system parameters: four application classes, Google-Glass-like wearable, phone."""

from __future__ import annotations

from .model import BITS_PER_MB, ApplicationClass, DeviceProfile

IOT_SENSORS = ApplicationClass("iot_sensors", 0.2 * BITS_PER_MB, 30.0)
FOUR_QUEENS = ApplicationClass("4_queens", 0.2 * BITS_PER_MB, 87.8)
FIVE_QUEENS = ApplicationClass("5_queens", 0.2 * BITS_PER_MB, 263.0)
FACE_RECOGNITION = ApplicationClass("face_recognition", 0.42 * BITS_PER_MB, 297.62)

APPS = (IOT_SENSORS, FOUR_QUEENS, FIVE_QUEENS, FACE_RECOGNITION)

SWITCHED_CAPACITANCE = 1e-28

WEARABLE = DeviceProfile(
    cpu_hz=1e9,
    switched_capacitance=SWITCHED_CAPACITANCE,
    tx_power_w=255.2e-3,
    idle_power_w=2.563e-3,
)
SMARTPHONE = DeviceProfile(
    cpu_hz=2.2e9,
    switched_capacitance=SWITCHED_CAPACITANCE,
    rx_power_w=210e-3,
)

# effective Wi-Fi throughput recovered from the reported IoT and face-recognition time ratios
RATE_BPS = 20.3e6

ALPHA = 0.5
GAMMA = 0.9
BETA_E = 0.5
RUNS = 10
TASKS_PER_RUN = 300
SEED = 20240611
