#pragma once

// Topocentric, refraction-free sun positions from an independent
// implementation of the NREL solar position algorithm (pvlib spa_python,
// default delta T). The Denver row is the algorithm's published test case.
namespace solar_ref {

struct Case {
  const char* name;
  double lat, lon, alt;
  const char* instant;
  double zenith, azimuth;
};

inline constexpr Case kCases[] = {
  {"denver", 39.742476, -105.1786, 1830.14, "2003-10-17T19:30:30Z", 50.127954, 194.340241},
  {"amsterdam", 52.37, 4.9, 0, "2023-12-21T11:40:00Z", 75.809961, 180.395696},
  {"amsterdam", 52.37, 4.9, 0, "2023-06-21T05:10:00Z", 76.306092, 69.242596},
  {"madrid", 40.42, -3.7, 650, "2023-03-20T12:15:00Z", 40.606799, 177.188328},
  {"madrid", 40.42, -3.7, 650, "2023-07-01T18:45:00Z", 79.977203, 291.866330},
  {"madrid", 40.42, -3.7, 650, "1962-01-15T09:00:00Z", 77.755602, 132.105506},
  {"sydney", -33.87, 151.21, 20, "2010-01-05T02:00:00Z", 11.232766, 0.405563},
  {"sydney", -33.87, 151.21, 20, "2031-06-21T23:30:00Z", 67.130734, 36.586510},
  {"quito", -0.18, -78.47, 2850, "2024-09-22T17:20:00Z", 3.419927, 271.762728},
  {"tromso", 69.65, 18.96, 10, "2020-06-21T23:00:00Z", 86.886326, 3.177087},
  {"tromso", 69.65, 18.96, 10, "2020-03-01T10:30:00Z", 77.111354, 173.279676},
  {"anchorage", 61.22, -149.9, 30, "1975-12-01T21:00:00Z", 83.607989, 168.657838},
  {"cape_town", -33.92, 18.42, 0, "2088-11-11T15:45:00Z", 70.974171, 260.931580},
  {"honolulu", 21.31, -157.86, 5, "2050-05-25T22:35:00Z", 1.528571, 262.749997},
  {"singapore", 1.35, 103.82, 15, "1999-12-31T04:00:00Z", 29.465496, 147.202113},
  {"buenos_aires", -34.6, -58.38, 25, "2015-08-08T14:00:00Z", 58.094157, 34.217599},
  {"tokyo", 35.68, 139.69, 40, "2099-02-14T01:10:00Z", 54.645924, 148.024045},
  {"nairobi", -1.29, 36.82, 1795, "1951-04-04T10:00:00Z", 9.030271, 318.404254},
};

}  // namespace solar_ref
