import numpy as np
import pytest

from lsat.store import CSV_HEADER

HEADER_LINE = ",".join(CSV_HEADER)


def weather_csv_text(cities, hours, seed=0, start_day=1):
    """Deterministic synthetic weather CSV covering `hours` hourly rows per city."""
    rng = np.random.default_rng(seed)
    lines = [HEADER_LINE]
    for c, city in enumerate(cities):
        phase = rng.uniform(0, 2 * np.pi)
        noise = rng.normal(0.0, 5.0, hours)
        for h in range(hours):
            day = start_day + h // 24
            stamp = f"2024-03-{day:02d}T{h % 24:02d}:00:00Z"
            irradiance = max(
                0.0, 400.0 + 300.0 * np.sin(2 * np.pi * (h % 24) / 24.0 + phase) + noise[h]
            )
            lines.append(
                f"{city},{stamp},{10 + c % 7},{1005 + c % 9},{40 + h % 50},{irradiance:.4f}"
            )
    return "\n".join(lines) + "\n"


@pytest.fixture
def small_weather_csv(tmp_path):
    path = tmp_path / "weather.csv"
    path.write_text(weather_csv_text(["alba", "brasov", "cluj"], 72, seed=3))
    return path
