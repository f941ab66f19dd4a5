//
// Copyright 2025-2026 The AgriTwin Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.
//

#pragma once

#include <memory>
#include <string>

#include "agritwin/core/adapter.hpp"
#include "agritwin/core/http_service.hpp"
#include "agritwin/field/field_twin.hpp"

namespace agritwin::sim
{
  /// The "real entity" side the natives act on: simulated ground truth plus
  /// the discrete world clock. Process applications advance the clock by one
  /// step each.
  class GroundTruthAccess
  {
  public:
    virtual ~GroundTruthAccess() = default;

    virtual Timestamp now() const = 0;
    virtual const field::FieldSeed &fieldSeed(const TwinId &fieldId) const = 0;
    virtual double nitrogen(const TwinId &fieldId) const = 0;
    virtual double weedDensity(const TwinId &fieldId) const = 0;
    virtual void applyWeedControl(const TwinId &fieldId) = 0;
    virtual void applyFertilization(const TwinId &fieldId, double amountKgHa) = 0;
  };

  double round6(double value);

  /// Behavior shared by both robot vendors. Wire incompatibility lives in the
  /// codecs, not here, which keeps cross-vendor behavioral equivalence real.
  class RobotBehaviorCore
  {
  public:
    struct JobResult
    {
      std::string jobRef;
      Timestamp startedAt;
      Timestamp finishedAt;
      double coveredAreaHa = 0.0;
      double weedDensityAfter = 0.0;
    };

    RobotBehaviorCore(std::string name, GroundTruthAccess &world);

    JobResult executeWeedJob(const GeoPolygon &route, const std::string &crop,
                             const TwinId &fieldId);

    double tankLiters() const { return m_tankLiters; }
    double speedMps() const { return m_speedMps; }
    const std::string &state() const { return m_state; }

  private:
    std::string m_name;
    GroundTruthAccess &m_world;
    double m_tankLiters = 120.0;
    double m_speedMps = 2.5;
    std::string m_state = "idle";
    int m_jobCounter = 0;
  };

  /// RobotAlpha's vendor API: verb-style RPC, snake_case, liters and km/h.
  ///   GET  /rpc/get_status
  ///   POST /rpc/execute_job   {"route": [[lon,lat],...], "crop", "field_ref"}
  class AlphaRobotNative
  {
  public:
    AlphaRobotNative(std::string name, GroundTruthAccess &world);

    void start(const std::string &host, int port);
    void stop();
    bool running() const { return m_http.running(); }
    std::string baseUrl() const { return m_http.baseUrl(); }
    RobotBehaviorCore &core() { return m_core; }

  private:
    RobotBehaviorCore m_core;
    HttpService m_http;
  };

  /// RobotBeta's vendor API: resource-style, camelCase, milliliters and m/s.
  /// Payloads are structurally distinct from RobotAlpha's on purpose.
  ///   GET  /api/v2/telemetry
  ///   POST /api/v2/jobs   {"waypoints": [{"lon","lat"},...], "cropKind", "fieldRef"}
  class BetaRobotNative
  {
  public:
    BetaRobotNative(std::string name, GroundTruthAccess &world);

    void start(const std::string &host, int port);
    void stop();
    bool running() const { return m_http.running(); }
    std::string baseUrl() const { return m_http.baseUrl(); }
    RobotBehaviorCore &core() { return m_core; }

  private:
    RobotBehaviorCore m_core;
    HttpService m_http;
  };

  /// Route planner vendor API: POST /plan {"field": [[lon,lat],...], "crop"}.
  /// Produces a deterministic serpentine route over the field bounding box.
  class RoutePlannerNative
  {
  public:
    RoutePlannerNative();

    void start(const std::string &host, int port);
    void stop();
    std::string baseUrl() const { return m_http.baseUrl(); }

    static GeoPolygon planRoute(const GeoPolygon &fieldBoundary,
                                const std::string &crop);

  private:
    HttpService m_http;
  };

  /// Fertilizer spreader vendor API: POST /spread {"field_ref", "amount_kg_ha"}.
  class SpreaderNative
  {
  public:
    SpreaderNative(std::string name, GroundTruthAccess &world);

    void start(const std::string &host, int port);
    void stop();
    std::string baseUrl() const { return m_http.baseUrl(); }

  private:
    std::string m_name;
    GroundTruthAccess &m_world;
    HttpService m_http;
    int m_jobCounter = 0;
  };

  /// The farm-management system holding one field's data behind a vendor
  /// export API: GET /export/fielddata. Nitrogen is reported in g/m2.
  class FmisNative
  {
  public:
    FmisNative(field::FieldSeed seed, GroundTruthAccess &world);

    void start(const std::string &host, int port);
    void stop();
    std::string baseUrl() const { return m_http.baseUrl(); }
    const field::FieldSeed &seed() const { return m_seed; }

  private:
    field::FieldSeed m_seed;
    GroundTruthAccess &m_world;
    HttpService m_http;
  };

  // Adapters wrapping each native system as a standardized twin (DD.1).
  std::shared_ptr<AdaptedTwin> makeAlphaRobotTwin(const TwinId &id,
                                                  const std::string &nativeBaseUrl,
                                                  const vocab::Vocabulary *vocabulary);
  std::shared_ptr<AdaptedTwin> makeBetaRobotTwin(const TwinId &id,
                                                 const std::string &nativeBaseUrl,
                                                 const vocab::Vocabulary *vocabulary);
  std::shared_ptr<AdaptedTwin> makePlannerTwin(const TwinId &id,
                                               const std::string &nativeBaseUrl,
                                               const vocab::Vocabulary *vocabulary);
  std::shared_ptr<AdaptedTwin> makeSpreaderTwin(const TwinId &id,
                                                const std::string &nativeBaseUrl,
                                                const vocab::Vocabulary *vocabulary);
  std::shared_ptr<AdaptedTwin> makeFmisTwin(const TwinId &id,
                                            const std::string &nativeBaseUrl,
                                            const vocab::Vocabulary *vocabulary);
}  // namespace agritwin::sim
