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

#include "agritwin/sim/natives.hpp"

#include <cmath>

#include "agritwin/core/errors.hpp"
#include "agritwin/core/geometry.hpp"
#include "agritwin/core/json_codec.hpp"
#include "agritwin/vocab/ids.hpp"

namespace agritwin::sim
{
  double round6(double value) { return std::round(value * 1e6) / 1e6; }

  namespace
  {
    using nlohmann::json;

    /// Vendor servers reject anything but their exact schema; this is the
    /// wire-incompatibility premise the adapters have to bridge.
    bool hasExactKeys(const json &body, std::initializer_list<const char *> keys)
    {
      if (!body.is_object() || body.size() != keys.size())
        return false;
      for (const char *key : keys)
        if (!body.contains(key))
          return false;
      return true;
    }

    void vendorFault(httplib::Response &res, int status, const json &body)
    {
      res.status = status;
      res.set_content(body.dump(), "application/json");
    }

    json nativeCall(const std::string &baseUrl, const std::string &method,
                    const std::string &path, const json *body)
    {
      httplib::Client client(baseUrl);
      client.set_connection_timeout(std::chrono::seconds(5));
      client.set_read_timeout(std::chrono::seconds(5));

      httplib::Result result =
        method == "GET" ? client.Get(path)
                        : client.Post(path, body ? body->dump() : "{}",
                                      "application/json");
      if (!result)
        throw Error(ErrorCode::DownstreamUnavailable,
                    "native system at " + baseUrl + " is unreachable");
      if (result->status >= 400)
        throw Error(ErrorCode::DownstreamUnavailable,
                    "native system at " + baseUrl + " rejected the call (HTTP " +
                      std::to_string(result->status) + "): " + result->body);

      json parsed = json::parse(result->body, nullptr, false);
      if (parsed.is_discarded())
        throw Error(ErrorCode::DownstreamUnavailable,
                    "native system at " + baseUrl + " returned invalid JSON");
      return parsed;
    }

    GeoPolygon pointsFromPairs(const json &pairs)
    {
      GeoPolygon polygon;
      for (const auto &pair : pairs)
        polygon.points.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
      return polygon;
    }

    bool isPairArray(const json &value)
    {
      if (!value.is_array() || value.empty())
        return false;
      for (const auto &entry : value)
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
            !entry[1].is_number())
          return false;
      return true;
    }
  }  // namespace

  RobotBehaviorCore::RobotBehaviorCore(std::string name, GroundTruthAccess &world)
    : m_name(std::move(name)), m_world(world)
  {
  }

  RobotBehaviorCore::JobResult RobotBehaviorCore::executeWeedJob(
    const GeoPolygon &route, const std::string &crop, const TwinId &fieldId)
  {
    if (route.points.empty() || crop.empty())
      throw Error(ErrorCode::InvalidArgument, "job needs a route and a crop");

    const field::FieldSeed &seed = m_world.fieldSeed(fieldId);

    JobResult result;
    result.startedAt = m_world.now();
    m_state = "working";
    m_world.applyWeedControl(fieldId);
    m_state = "idle";
    result.finishedAt = m_world.now();
    result.coveredAreaHa = round6(areaHectares(seed.boundaries));
    result.weedDensityAfter = m_world.weedDensity(fieldId);
    result.jobRef = m_name + "-job-" + std::to_string(++m_jobCounter);

    m_tankLiters = round6(m_tankLiters - 0.25 * result.coveredAreaHa);
    return result;
  }

  AlphaRobotNative::AlphaRobotNative(std::string name, GroundTruthAccess &world)
    : m_core(std::move(name), world)
  {
    auto &server = m_http.server();
    GroundTruthAccess *clock = &world;

    server.Get("/rpc/get_status", [this, clock](const httplib::Request &,
                                                httplib::Response &res) {
      json body = {{"state", m_core.state()},
                   {"tank_level_l", m_core.tankLiters()},
                   {"ground_speed_kmh", round6(m_core.speedMps() * 3.6)},
                   {"clock_ms", clock->now().millis()}};
      res.set_content(body.dump(), "application/json");
    });

    server.Post("/rpc/execute_job", [this](const httplib::Request &req,
                                           httplib::Response &res) {
      json body = json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !hasExactKeys(body, {"route", "crop", "field_ref"}) ||
          !isPairArray(body["route"]) || !body["crop"].is_string() ||
          !body["field_ref"].is_string())
      {
        vendorFault(res, 400, {{"fault", "malformed execute_job request"}});
        return;
      }
      try
      {
        RobotBehaviorCore::JobResult result = m_core.executeWeedJob(
          pointsFromPairs(body["route"]), body["crop"].get<std::string>(),
          TwinId(body["field_ref"].get<std::string>()));
        json out = {{"job_ref", result.jobRef},
                    {"started_ms", result.startedAt.millis()},
                    {"finished_ms", result.finishedAt.millis()},
                    {"covered_area_ha", result.coveredAreaHa},
                    {"weed_density_after", result.weedDensityAfter}};
        res.set_content(out.dump(), "application/json");
      }
      catch (const std::exception &e)
      {
        vendorFault(res, 422, {{"fault", e.what()}});
      }
    });
  }

  void AlphaRobotNative::start(const std::string &host, int port)
  {
    m_http.start(host, port);
  }

  void AlphaRobotNative::stop() { m_http.stop(); }

  BetaRobotNative::BetaRobotNative(std::string name, GroundTruthAccess &world)
    : m_core(std::move(name), world)
  {
    auto &server = m_http.server();
    GroundTruthAccess *clock = &world;

    server.Get("/api/v2/telemetry", [this, clock](const httplib::Request &,
                                                  httplib::Response &res) {
      std::string mode = m_core.state();
      for (char &c : mode)
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      json body = {{"mode", mode},
                   {"tankMilliliters", round6(m_core.tankLiters() * 1000.0)},
                   {"speedMetersPerSecond", m_core.speedMps()},
                   {"clockMs", clock->now().millis()}};
      res.set_content(body.dump(), "application/json");
    });

    server.Post("/api/v2/jobs", [this](const httplib::Request &req,
                                       httplib::Response &res) {
      json body = json::parse(req.body, nullptr, false);
      bool wellFormed =
        !body.is_discarded() && hasExactKeys(body, {"waypoints", "cropKind", "fieldRef"}) &&
        body["waypoints"].is_array() && !body["waypoints"].empty() &&
        body["cropKind"].is_string() && body["fieldRef"].is_string();
      if (wellFormed)
        for (const auto &waypoint : body["waypoints"])
          if (!waypoint.is_object() || !waypoint.contains("lon") ||
              !waypoint.contains("lat"))
            wellFormed = false;
      if (!wellFormed)
      {
        vendorFault(res, 400, {{"errorCode", "SCHEMA_VIOLATION"},
                               {"detail", "expected waypoints/cropKind/fieldRef"}});
        return;
      }

      GeoPolygon route;
      for (const auto &waypoint : body["waypoints"])
        route.points.push_back(
          {waypoint["lon"].get<double>(), waypoint["lat"].get<double>()});

      try
      {
        RobotBehaviorCore::JobResult result = m_core.executeWeedJob(
          route, body["cropKind"].get<std::string>(),
          TwinId(body["fieldRef"].get<std::string>()));
        json out = {{"jobId", result.jobRef},
                    {"beganMs", result.startedAt.millis()},
                    {"endedMs", result.finishedAt.millis()},
                    {"coverageSquareMeters", round6(result.coveredAreaHa * 10000.0)},
                    {"weedsPerSquareMeter", result.weedDensityAfter}};
        res.status = 201;
        res.set_content(out.dump(), "application/json");
      }
      catch (const std::exception &e)
      {
        vendorFault(res, 422, {{"errorCode", "JOB_REJECTED"}, {"detail", e.what()}});
      }
    });
  }

  void BetaRobotNative::start(const std::string &host, int port)
  {
    m_http.start(host, port);
  }

  void BetaRobotNative::stop() { m_http.stop(); }

  RoutePlannerNative::RoutePlannerNative()
  {
    m_http.server().Post("/plan", [](const httplib::Request &req,
                                     httplib::Response &res) {
      json body = json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !hasExactKeys(body, {"field", "crop"}) ||
          !isPairArray(body["field"]) || !body["crop"].is_string())
      {
        vendorFault(res, 400, {{"fault", "malformed plan request"}});
        return;
      }
      GeoPolygon route =
        planRoute(pointsFromPairs(body["field"]), body["crop"].get<std::string>());
      json out = {{"route", toJson(route)},
                  {"passes", static_cast<std::int64_t>(route.points.size() / 2)}};
      res.set_content(out.dump(), "application/json");
    });
  }

  GeoPolygon RoutePlannerNative::planRoute(const GeoPolygon &fieldBoundary,
                                           const std::string &crop)
  {
    double lonMin = fieldBoundary.points.front().lon;
    double lonMax = lonMin;
    double latMin = fieldBoundary.points.front().lat;
    double latMax = latMin;
    for (const auto &point : fieldBoundary.points)
    {
      lonMin = std::min(lonMin, point.lon);
      lonMax = std::max(lonMax, point.lon);
      latMin = std::min(latMin, point.lat);
      latMax = std::max(latMax, point.lat);
    }

    double spacingMeters = crop == "sugar beet" ? 2.5 : 3.0;
    double spacingDegrees = spacingMeters / 111320.0;

    GeoPolygon route;
    bool leftToRight = true;
    for (double lat = latMin; lat <= latMax + spacingDegrees / 2;
         lat += spacingDegrees)
    {
      if (leftToRight)
      {
        route.points.push_back({lonMin, lat});
        route.points.push_back({lonMax, lat});
      }
      else
      {
        route.points.push_back({lonMax, lat});
        route.points.push_back({lonMin, lat});
      }
      leftToRight = !leftToRight;
    }
    return route;
  }

  void RoutePlannerNative::start(const std::string &host, int port)
  {
    m_http.start(host, port);
  }

  void RoutePlannerNative::stop() { m_http.stop(); }

  SpreaderNative::SpreaderNative(std::string name, GroundTruthAccess &world)
    : m_name(std::move(name)), m_world(world)
  {
    m_http.server().Post("/spread", [this](const httplib::Request &req,
                                           httplib::Response &res) {
      json body = json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !hasExactKeys(body, {"field_ref", "amount_kg_ha"}) ||
          !body["field_ref"].is_string() || !body["amount_kg_ha"].is_number())
      {
        vendorFault(res, 400, {{"fault", "malformed spread request"}});
        return;
      }
      try
      {
        TwinId fieldId(body["field_ref"].get<std::string>());
        const field::FieldSeed &seed = m_world.fieldSeed(fieldId);

        Timestamp started = m_world.now();
        m_world.applyFertilization(fieldId, body["amount_kg_ha"].get<double>());
        json out = {{"job_ref", m_name + "-job-" + std::to_string(++m_jobCounter)},
                    {"started_ms", started.millis()},
                    {"finished_ms", m_world.now().millis()},
                    {"covered_area_ha", round6(areaHectares(seed.boundaries))},
                    {"nitrogen_after_kg_ha", m_world.nitrogen(fieldId)}};
        res.set_content(out.dump(), "application/json");
      }
      catch (const std::exception &e)
      {
        vendorFault(res, 422, {{"fault", e.what()}});
      }
    });
  }

  void SpreaderNative::start(const std::string &host, int port)
  {
    m_http.start(host, port);
  }

  void SpreaderNative::stop() { m_http.stop(); }

  FmisNative::FmisNative(field::FieldSeed seed, GroundTruthAccess &world)
    : m_seed(std::move(seed)), m_world(world)
  {
    m_http.server().Get("/export/fielddata", [this](const httplib::Request &,
                                                    httplib::Response &res) {
      // this vendor stores nitrogen in g/m2: 1 kg/ha = 0.1 g/m2
      json body = {{"fieldName", m_seed.id.value},
                   {"borders", toJson(m_seed.boundaries)},
                   {"cropName", m_seed.crop},
                   {"soil_nitrogen_g_m2", round6(m_seed.initialNitrogenKgHa * 0.1)},
                   {"sampled_ms", m_world.now().millis()}};
      res.set_content(body.dump(), "application/json");
    });
  }

  void FmisNative::start(const std::string &host, int port) { m_http.start(host, port); }

  void FmisNative::stop() { m_http.stop(); }

  namespace
  {
    NativeFetch fetchOver(const std::string &baseUrl, const std::string &path,
                          const std::string &clockField)
    {
      return [baseUrl, path, clockField]() {
        json doc = nativeCall(baseUrl, "GET", path, nullptr);
        return NativeState{doc, Timestamp::fromMillis(doc.at(clockField).get<std::int64_t>())};
      };
    }

    TwinShell robotSkeleton(const TwinId &id, const vocab::Vocabulary *vocabulary)
    {
      using namespace ids;
      Submodel weedwork{"weedwork", SemanticId(kSmWeedwork), {}};
      weedwork.elements.push_back(PropertyElement{
        "tankLevel", SemanticId(kRobotTankLevel), Datatype::Decimal, "L", 0.0, {}});
      weedwork.elements.push_back(PropertyElement{
        "groundSpeed", SemanticId(kRobotSpeed), Datatype::Decimal, "m/s", 0.0, {}});
      weedwork.elements.push_back(PropertyElement{
        "status", SemanticId(kRobotStatus), Datatype::Text, "1", std::string("unknown"), {}});
      weedwork.elements.push_back(OperationElement{
        "executeJob",
        SemanticId(kOpExecuteJob),
        {{"route", Datatype::GeoPolygon, "deg"},
         {"cropType", Datatype::Text, "1"},
         {"fieldId", Datatype::Text, "1"}},
        {{"record", Datatype::Text, "1"}}});
      return createShell(id, TwinKind::SystemTwin, {std::move(weedwork)}, vocabulary);
    }

    field::JobRecord composeRecord(const TwinId &executedBy, const std::string &fieldRef,
                                   field::ProcessKind kind, const std::string &jobRef,
                                   std::int64_t startedMs, std::int64_t finishedMs,
                                   double coveredAreaHa)
    {
      field::JobRecord record;
      record.jobId = jobRef;
      record.fieldId = TwinId(fieldRef);
      record.processKind = kind;
      record.executedBy = executedBy;
      record.startedAt = Timestamp::fromMillis(startedMs);
      record.finishedAt = Timestamp::fromMillis(finishedMs);
      record.coveredAreaHa = coveredAreaHa;
      return record;
    }
  }  // namespace

  std::shared_ptr<AdaptedTwin> makeAlphaRobotTwin(const TwinId &id,
                                                  const std::string &nativeBaseUrl,
                                                  const vocab::Vocabulary *vocabulary)
  {
    using namespace ids;
    AdapterSpec spec;
    spec.nativeEndpoint = nativeBaseUrl;
    spec.mappings = {
      {"tank_level_l", SemanticId(kRobotTankLevel), 1.0, 0.0, Datatype::Decimal, {}},
      {"ground_speed_kmh", SemanticId(kRobotSpeed), 1.0 / 3.6, 0.0, Datatype::Decimal, {}},
      {"state", SemanticId(kRobotStatus), 1.0, 0.0, Datatype::Text, {}},
    };

    std::map<std::string, LocalTwin::OperationHandler> operations;
    operations["weedwork/executeJob"] = [id, nativeBaseUrl](const ArgMap &args) {
      json body = {{"route", toJson(std::get<GeoPolygon>(args.at("route")))},
                   {"crop", std::get<std::string>(args.at("cropType"))},
                   {"field_ref", std::get<std::string>(args.at("fieldId"))}};
      json reply = nativeCall(nativeBaseUrl, "POST", "/rpc/execute_job", &body);

      field::JobRecord record = composeRecord(
        id, std::get<std::string>(args.at("fieldId")), field::ProcessKind::WeedControl,
        reply.at("job_ref").get<std::string>(), reply.at("started_ms").get<std::int64_t>(),
        reply.at("finished_ms").get<std::int64_t>(),
        reply.at("covered_area_ha").get<double>());
      record.outputs[kWeedDensity] = reply.at("weed_density_after");
      return ArgMap{{"record", field::toJson(record).dump()}};
    };

    return wrapNativeSystem(std::move(spec), robotSkeleton(id, vocabulary),
                            fetchOver(nativeBaseUrl, "/rpc/get_status", "clock_ms"),
                            std::move(operations));
  }

  std::shared_ptr<AdaptedTwin> makeBetaRobotTwin(const TwinId &id,
                                                 const std::string &nativeBaseUrl,
                                                 const vocab::Vocabulary *vocabulary)
  {
    using namespace ids;
    AdapterSpec spec;
    spec.nativeEndpoint = nativeBaseUrl;
    spec.mappings = {
      {"tankMilliliters", SemanticId(kRobotTankLevel), 0.001, 0.0, Datatype::Decimal, {}},
      {"speedMetersPerSecond", SemanticId(kRobotSpeed), 1.0, 0.0, Datatype::Decimal, {}},
      {"mode",
       SemanticId(kRobotStatus),
       1.0,
       0.0,
       Datatype::Text,
       {{"IDLE", "idle"}, {"WORKING", "working"}}},
    };

    std::map<std::string, LocalTwin::OperationHandler> operations;
    operations["weedwork/executeJob"] = [id, nativeBaseUrl](const ArgMap &args) {
      json waypoints = json::array();
      for (const auto &point : std::get<GeoPolygon>(args.at("route")).points)
        waypoints.push_back({{"lon", point.lon}, {"lat", point.lat}});
      json body = {{"waypoints", std::move(waypoints)},
                   {"cropKind", std::get<std::string>(args.at("cropType"))},
                   {"fieldRef", std::get<std::string>(args.at("fieldId"))}};
      json reply = nativeCall(nativeBaseUrl, "POST", "/api/v2/jobs", &body);

      field::JobRecord record = composeRecord(
        id, std::get<std::string>(args.at("fieldId")), field::ProcessKind::WeedControl,
        reply.at("jobId").get<std::string>(), reply.at("beganMs").get<std::int64_t>(),
        reply.at("endedMs").get<std::int64_t>(),
        round6(reply.at("coverageSquareMeters").get<double>() / 10000.0));
      record.outputs[kWeedDensity] = reply.at("weedsPerSquareMeter");
      return ArgMap{{"record", field::toJson(record).dump()}};
    };

    return wrapNativeSystem(std::move(spec), robotSkeleton(id, vocabulary),
                            fetchOver(nativeBaseUrl, "/api/v2/telemetry", "clockMs"),
                            std::move(operations));
  }

  std::shared_ptr<AdaptedTwin> makePlannerTwin(const TwinId &id,
                                               const std::string &nativeBaseUrl,
                                               const vocab::Vocabulary *vocabulary)
  {
    using namespace ids;
    Submodel planning{"planning", SemanticId(kSmPlanning), {}};
    planning.elements.push_back(OperationElement{
      "planRoute",
      SemanticId(kOpPlanRoute),
      {{"boundaries", Datatype::GeoPolygon, "deg"}, {"crop", Datatype::Text, "1"}},
      {{"route", Datatype::GeoPolygon, "deg"}, {"passes", Datatype::Integer, "1"}}});
    TwinShell skeleton =
      createShell(id, TwinKind::SystemTwin, {std::move(planning)}, vocabulary);

    std::map<std::string, LocalTwin::OperationHandler> operations;
    operations["planning/planRoute"] = [nativeBaseUrl](const ArgMap &args) {
      json body = {{"field", toJson(std::get<GeoPolygon>(args.at("boundaries")))},
                   {"crop", std::get<std::string>(args.at("crop"))}};
      json reply = nativeCall(nativeBaseUrl, "POST", "/plan", &body);
      return ArgMap{{"route", geoPolygonFromJson(reply.at("route"))},
                    {"passes", reply.at("passes").get<std::int64_t>()}};
    };

    // no telemetry document on this vendor; nothing is mapped
    return wrapNativeSystem(AdapterSpec{nativeBaseUrl, {}}, std::move(skeleton),
                            [] { return NativeState{json::object(), Timestamp{}}; },
                            std::move(operations));
  }

  std::shared_ptr<AdaptedTwin> makeSpreaderTwin(const TwinId &id,
                                                const std::string &nativeBaseUrl,
                                                const vocab::Vocabulary *vocabulary)
  {
    using namespace ids;
    Submodel fertilizerwork{"fertilizerwork", SemanticId(kSmFertilizerwork), {}};
    fertilizerwork.elements.push_back(OperationElement{
      "applyFertilizer",
      SemanticId(kOpApplyFertilizer),
      {{"fieldId", Datatype::Text, "1"}, {"amountKgHa", Datatype::Decimal, "kg/ha"}},
      {{"record", Datatype::Text, "1"}}});
    TwinShell skeleton =
      createShell(id, TwinKind::SystemTwin, {std::move(fertilizerwork)}, vocabulary);

    std::map<std::string, LocalTwin::OperationHandler> operations;
    operations["fertilizerwork/applyFertilizer"] = [id, nativeBaseUrl](const ArgMap &args) {
      json body = {{"field_ref", std::get<std::string>(args.at("fieldId"))},
                   {"amount_kg_ha", std::get<double>(args.at("amountKgHa"))}};
      json reply = nativeCall(nativeBaseUrl, "POST", "/spread", &body);

      field::JobRecord record = composeRecord(
        id, std::get<std::string>(args.at("fieldId")),
        field::ProcessKind::Fertilization, reply.at("job_ref").get<std::string>(),
        reply.at("started_ms").get<std::int64_t>(),
        reply.at("finished_ms").get<std::int64_t>(),
        reply.at("covered_area_ha").get<double>());
      record.outputs[kSoilNitrogen] = reply.at("nitrogen_after_kg_ha");
      return ArgMap{{"record", field::toJson(record).dump()}};
    };

    return wrapNativeSystem(AdapterSpec{nativeBaseUrl, {}}, std::move(skeleton),
                            [] { return NativeState{json::object(), Timestamp{}}; },
                            std::move(operations));
  }

  std::shared_ptr<AdaptedTwin> makeFmisTwin(const TwinId &id,
                                            const std::string &nativeBaseUrl,
                                            const vocab::Vocabulary *vocabulary)
  {
    using namespace ids;
    Submodel fielddata{"fielddata", SemanticId(kSmFieldData), {}};
    fielddata.elements.push_back(PropertyElement{
      "fieldBoundaries", SemanticId(kFieldBoundaries), Datatype::GeoPolygon, "deg",
      GeoPolygon{}, {}});
    fielddata.elements.push_back(PropertyElement{
      "cropType", SemanticId(kCropType), Datatype::Text, "1", std::string(), {}});
    fielddata.elements.push_back(PropertyElement{
      "soilNitrogen", SemanticId(kSoilNitrogen), Datatype::Decimal, "kg/ha", 0.0, {}});
    TwinShell skeleton =
      createShell(id, TwinKind::SystemTwin, {std::move(fielddata)}, vocabulary);

    AdapterSpec spec;
    spec.nativeEndpoint = nativeBaseUrl;
    spec.mappings = {
      {"borders", SemanticId(kFieldBoundaries), 1.0, 0.0, Datatype::GeoPolygon, {}},
      {"cropName", SemanticId(kCropType), 1.0, 0.0, Datatype::Text, {}},
      // vendor stores g/m2; canonical is kg/ha
      {"soil_nitrogen_g_m2", SemanticId(kSoilNitrogen), 10.0, 0.0, Datatype::Decimal, {}},
    };

    return wrapNativeSystem(std::move(spec), std::move(skeleton),
                            fetchOver(nativeBaseUrl, "/export/fielddata", "sampled_ms"),
                            {});
  }
}  // namespace agritwin::sim
