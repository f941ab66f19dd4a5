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

#include <atomic>
#include <csignal>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "agritwin/core/http_twin.hpp"
#include "agritwin/core/json_codec.hpp"
#include "agritwin/field/field_twin.hpp"
#include "agritwin/hub/twin_hub.hpp"
#include "agritwin/mediator/mediator.hpp"
#include "agritwin/orchestrator/orchestrator.hpp"
#include "agritwin/sim/scenario.hpp"
#include "agritwin/sim/world.hpp"
#include "agritwin/vocab/agrivoc.hpp"

namespace
{
  using namespace agritwin;

  std::atomic<bool> g_stop{false};

  void onSignal(int) { g_stop = true; }

  void waitForSignal()
  {
    std::signal(SIGINT, onSignal);
    std::signal(SIGTERM, onSignal);
    while (!g_stop)
      std::this_thread::sleep_for(std::chrono::milliseconds(200));
  }

  std::shared_ptr<vocab::Vocabulary> loadVocabulary(const std::string &seedPath)
  {
    if (seedPath.empty())
      return vocab::agrivoc();
    return std::make_shared<vocab::Vocabulary>(vocab::Vocabulary::fromSeedFile(seedPath));
  }

  hub::Predicate parseWhere(const std::string &expression)
  {
    for (const char *op : {"<=", ">=", "=", "<", ">"})
    {
      auto pos = expression.find(op);
      if (pos == std::string::npos || pos == 0)
        continue;
      std::string id = expression.substr(0, pos);
      std::string raw = expression.substr(pos + std::strlen(op));
      hub::TagValue value;
      try
      {
        std::size_t consumed = 0;
        double number = std::stod(raw, &consumed);
        value = consumed == raw.size() ? hub::TagValue(number) : hub::TagValue(raw);
      }
      catch (const std::exception &)
      {
        value = raw;
      }
      return {SemanticId(id), hub::comparatorFromString(op), value};
    }
    throw Error(ErrorCode::BadConfig,
                "cannot parse predicate '" + expression + "' (want id<op>value)");
  }

  int serveHub(const std::string &host, int port, const std::string &dataDir,
               const std::string &vocabPath, const std::string &fieldsDir,
               const std::string &orchestratorUrl)
  {
    hub::TwinHub::Config config;
    config.host = host;
    config.port = port;
    config.dataDir = dataDir;
    config.vocabulary = loadVocabulary(vocabPath);
    hub::TwinHub twinHub(std::move(config));
    twinHub.start();

    field::FieldTwinService fields(twinHub, {});
    if (!orchestratorUrl.empty())
      fields.setTriggerSink([orchestratorUrl](const field::ProcessTrigger &trigger) {
        orch::OrchestratorClient(orchestratorUrl).deliverTrigger(trigger);
      });
    fields.attachAll();  // twins restored from dataDir need their operations again

    if (!fieldsDir.empty())
    {
      for (const auto &entry : std::filesystem::directory_iterator(fieldsDir))
      {
        if (entry.path().extension() != ".json")
          continue;
        field::FieldSeed seed = field::fieldSeedFromFile(entry.path().string());
        if (!twinHub.registry().containsTwin(seed.id))
          std::cout << "hosted " << seed.id.value << " at " << fields.hostField(seed)
                    << "\n";
      }
    }

    std::cout << "twinhub listening on " << twinHub.baseUrl() << " (data dir: "
              << (dataDir.empty() ? "<none>" : dataDir) << ")" << std::endl;
    waitForSignal();
    twinHub.stop();
    return 0;
  }

  int serveMediator(const std::string &host, int port, const std::string &hubUrl,
                    const std::string &vocabPath)
  {
    auto mediatorCore = std::make_shared<mediator::Mediator>(
      mediator::hubBackedDeps(hubUrl, loadVocabulary(vocabPath), {}));
    HttpService http;
    mediator::mountMediator(http.server(), mediatorCore);
    http.start(host, port);
    std::cout << "mediator listening on " << http.baseUrl() << " (hub: " << hubUrl
              << ")" << std::endl;
    waitForSignal();
    http.stop();
    return 0;
  }

  int serveOrchestrator(const std::string &host, int port, const std::string &hubUrl,
                        const std::string &recipesDir, int maxPasses)
  {
    auto orchestrator = std::make_shared<orch::Orchestrator>(
      orch::hubBackedDeps(hubUrl, {}, std::chrono::seconds(5), maxPasses));
    if (!recipesDir.empty())
    {
      for (const auto &entry : std::filesystem::directory_iterator(recipesDir))
      {
        if (entry.path().extension() != ".json")
          continue;
        std::ifstream in(entry.path());
        std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
        orch::Recipe recipe = orch::loadRecipe(bytes);
        orchestrator->registerRecipe(recipe);
        std::cout << "recipe " << recipe.name << " digest " << recipe.definitionDigest
                  << "\n";
      }
    }

    HttpService http;
    orch::mountOrchestrator(http.server(), orchestrator);
    http.start(host, port);
    std::cout << "orchestrator listening on " << http.baseUrl() << " (hub: " << hubUrl
              << ")" << std::endl;
    waitForSignal();
    http.stop();
    return 0;
  }

  int serveWorld(const std::string &name, std::uint64_t seed, int basePort,
                 const std::string &dataDir)
  {
    sim::ScenarioSpec spec = sim::ScenarioSpec::forName(name, seed);
    spec.basePort = basePort;
    spec.dataDir = dataDir;
    sim::World world(spec);
    world.start();
    std::cout << "world '" << name << "' up: hub " << world.hubUrl() << ", mediator "
              << world.mediatorUrl() << ", orchestrator " << world.orchestratorUrl()
              << std::endl;
    waitForSignal();
    world.stop();
    return 0;
  }

  int runScenarioCommand(const std::string &name, std::uint64_t seed, int basePort,
                         const std::string &specPath, const std::string &reportOut)
  {
    sim::ScenarioSpec spec;
    if (!specPath.empty())
    {
      std::ifstream in(specPath);
      if (!in)
        throw Error(ErrorCode::BadConfig, "cannot open scenario spec '" + specPath + "'");
      spec = sim::ScenarioSpec::fromJson(json::parse(in));
    }
    else
    {
      spec = sim::ScenarioSpec::forName(name, seed);
      spec.basePort = basePort;
    }

    sim::World world(spec);
    world.start();
    sim::ScenarioReport report = sim::runScenario(world);
    world.stop();

    std::string out =
      reportOut.empty() ? "agritwin-report-" + spec.name + ".json" : reportOut;
    std::ofstream file(out);
    file << toJson(report).dump(2) << "\n";

    for (const auto &clause : report.clauses)
      std::cout << (clause.pass ? "PASS" : "FAIL") << "  " << clause.clause << "\n";
    std::cout << (report.pass ? "SCENARIO PASS" : "SCENARIO FAIL") << " (" << spec.name
              << ", seed " << spec.seed << ", report " << out << ")" << std::endl;
    return report.pass ? 0 : 1;
  }

  void printDescriptor(const ShellDescriptor &descriptor, const std::string &format)
  {
    if (format == "json")
    {
      std::cout << toJson(descriptor).dump(2) << std::endl;
      return;
    }
    std::cout << descriptor.id.value << "  [" << toString(descriptor.kind) << "]\n";
    std::cout << "  endpoint:  " << descriptor.endpoint << "\n";
    std::cout << "  structure: " << descriptor.structureHash << "\n";
    for (const auto &submodel : descriptor.submodels)
    {
      std::cout << "  " << submodel.shortName << " (" << submodel.semanticId.value
                << ")\n";
      for (const auto &element : submodel.elements)
        std::cout << "    "
                  << (element.kind == ElementKind::Property ? "prop " : "op   ")
                  << element.shortName << "  " << element.semanticId.value << "\n";
    }
  }
}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"agritwin operator tool"};
  app.require_subcommand(1);

  std::string hubUrl = "http://127.0.0.1:7700";
  std::string mediatorUrl = "http://127.0.0.1:7701";
  std::string orchestratorUrl = "http://127.0.0.1:7702";
  std::string host = "127.0.0.1";
  std::string format = "human";
  std::string dataDir;

  app.add_option("--hub-url", hubUrl, "twinhub base URL")->envname("AGRITWIN_HUB_URL");
  app.add_option("--format", format, "output format: human|json")
    ->check(CLI::IsMember({"human", "json"}));

  auto *serve = app.add_subcommand("serve", "run a component until SIGINT");
  int port = 7700;
  std::string vocabPath, fieldsDir, recipesDir, triggerOrchestratorUrl;
  int maxPasses = 100;
  std::string worldName = "adiop1";
  std::uint64_t seed = 1;
  int basePort = 7800;

  auto *serveHubCmd = serve->add_subcommand("hub", "twin registry + hosted field twins");
  serveHubCmd->add_option("--port", port, "listen port")->default_val(7700);
  serveHubCmd->add_option("--data-dir", dataDir, "snapshot directory")
    ->envname("AGRITWIN_DATA_DIR");
  serveHubCmd->add_option("--vocab", vocabPath, "vocabulary seed file");
  serveHubCmd->add_option("--fields", fieldsDir, "directory of field seed files");
  serveHubCmd->add_option("--orchestrator-url", triggerOrchestratorUrl,
                          "where field twins deliver process triggers");

  auto *serveMediatorCmd = serve->add_subcommand("mediator", "semantic exchange service");
  serveMediatorCmd->add_option("--port", port, "listen port")->default_val(7701);
  serveMediatorCmd->add_option("--vocab", vocabPath, "vocabulary seed file");

  auto *serveOrchestratorCmd =
    serve->add_subcommand("orchestrator", "recipe execution service");
  serveOrchestratorCmd->add_option("--port", port, "listen port")->default_val(7702);
  serveOrchestratorCmd->add_option("--recipes", recipesDir, "directory of recipe files");
  serveOrchestratorCmd->add_option("--max-passes", maxPasses,
                                   "bound for target-triggered processes");

  auto *serveWorldCmd = serve->add_subcommand("world", "full simulated deployment");
  serveWorldCmd->add_option("--name", worldName,
                            "scenario world: adiop1|adiop2|closedloop");
  serveWorldCmd->add_option("--seed", seed, "determinism seed");
  serveWorldCmd->add_option("--base-port", basePort, "first port of the world's range");
  serveWorldCmd->add_option("--data-dir", dataDir, "snapshot directory")
    ->envname("AGRITWIN_DATA_DIR");

  auto *twin = app.add_subcommand("twin", "inspect registered twins");
  auto *twinList = twin->add_subcommand("list", "all registered twin ids");
  std::string twinId;
  auto *twinShow = twin->add_subcommand("show", "descriptor of one twin");
  twinShow->add_option("id", twinId, "twin id")->required();
  auto *twinQuery = twin->add_subcommand("query", "search/filter twins");
  std::vector<std::string> wheres;
  std::string kindFilter;
  std::vector<double> geoBox;
  twinQuery->add_option("--where", wheres, "predicate id<op>value (repeatable)");
  twinQuery->add_option("--kind", kindFilter, "SystemTwin|FieldTwin");
  twinQuery->add_option("--geobox", geoBox, "lonMin latMin lonMax latMax")->expected(4);

  std::string grantor, subject, grantTwin, itemsCsv, scope = "one-time";
  auto *grant = app.add_subcommand("grant", "manage farmer grants");
  auto *grantAdd = grant->add_subcommand("add", "register a grant with the mediator");
  grantAdd->add_option("--mediator-url", mediatorUrl, "mediator base URL");
  grantAdd->add_option("--grantor", grantor)->required();
  grantAdd->add_option("--subject", subject)->required();
  grantAdd->add_option("--twin", grantTwin)->required();
  grantAdd->add_option("--items", itemsCsv, "comma-separated semantic ids")->required();
  grantAdd->add_option("--scope", scope)->check(CLI::IsMember({"one-time", "standing"}));

  std::string fromTwin, toTwin, requestedBy, commandId;
  auto *exchange = app.add_subcommand("exchange", "semantic data exchange");
  auto *exchangeSubmit = exchange->add_subcommand("submit", "submit a copy command");
  exchangeSubmit->add_option("--mediator-url", mediatorUrl, "mediator base URL");
  exchangeSubmit->add_option("--from", fromTwin, "source twin id")->required();
  exchangeSubmit->add_option("--to", toTwin, "destination twin id")->required();
  exchangeSubmit->add_option("--items", itemsCsv, "comma-separated semantic ids")
    ->required();
  exchangeSubmit->add_option("--by", requestedBy, "requesting principal")->required();
  exchangeSubmit->add_option("--command-id", commandId, "idempotency key");

  std::string recipeFile;
  std::vector<std::string> bindArgs;
  auto *recipe = app.add_subcommand("recipe", "run declarative recipes");
  auto *recipeRun = recipe->add_subcommand("run", "register + bind + run a recipe");
  recipeRun->add_option("--orchestrator-url", orchestratorUrl, "orchestrator base URL");
  recipeRun->add_option("--file", recipeFile, "recipe definition file")->required();
  recipeRun->add_option("--bind", bindArgs, "role=twinId (repeatable)")->required();

  std::string scenarioName, specPath, reportOut;
  auto *scenario = app.add_subcommand("scenario", "run reproduction scenarios");
  auto *scenarioRun = scenario->add_subcommand("run", "run one scenario end to end");
  scenarioRun->add_option("name", scenarioName, "adiop1|adiop2|closedloop")->required();
  scenarioRun->add_option("--seed", seed, "determinism seed");
  scenarioRun->add_option("--base-port", basePort, "first port of the world's range");
  scenarioRun->add_option("--spec", specPath, "scenario spec file {name,seed,overrides}");
  scenarioRun->add_option("--report-out", reportOut, "report file path");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    app.exit(e);
    return 2;
  }

  try
  {
    if (*serveHubCmd)
      return serveHub(host, port, dataDir, vocabPath, fieldsDir, triggerOrchestratorUrl);
    if (*serveMediatorCmd)
      return serveMediator(host, port, hubUrl, vocabPath);
    if (*serveOrchestratorCmd)
      return serveOrchestrator(host, port, hubUrl, recipesDir, maxPasses);
    if (*serveWorldCmd)
      return serveWorld(worldName, seed, basePort, dataDir);

    if (*twinList)
    {
      for (const TwinId &id : hub::HubClient(hubUrl).query({}))
        std::cout << id.value << "\n";
      return 0;
    }
    if (*twinShow)
    {
      printDescriptor(hub::HubClient(hubUrl).lookup(TwinId(twinId)), format);
      return 0;
    }
    if (*twinQuery)
    {
      hub::TwinQuery query;
      if (!kindFilter.empty())
        query.kind = twinKindFromString(kindFilter);
      for (const auto &expression : wheres)
        query.predicates.push_back(parseWhere(expression));
      if (!geoBox.empty())
        query.geoBox = hub::GeoBox{geoBox[0], geoBox[1], geoBox[2], geoBox[3]};
      for (const TwinId &id : hub::HubClient(hubUrl).query(query))
        std::cout << id.value << "\n";
      return 0;
    }

    auto splitCsv = [](const std::string &csv) {
      std::vector<SemanticId> items;
      std::size_t begin = 0;
      while (begin <= csv.size())
      {
        std::size_t comma = csv.find(',', begin);
        std::string item = csv.substr(begin, comma - begin);
        if (!item.empty())
          items.emplace_back(item);
        if (comma == std::string::npos)
          break;
        begin = comma + 1;
      }
      return items;
    };

    if (*grantAdd)
    {
      mediator::Grant g;
      g.grantor = grantor;
      g.subject = subject;
      g.twin = TwinId(grantTwin);
      g.items = splitCsv(itemsCsv);
      g.scope = scope == "standing" ? mediator::GrantScope::Standing
                                    : mediator::GrantScope::OneTime;
      std::cout << mediator::MediatorClient(mediatorUrl).registerGrant(g) << std::endl;
      return 0;
    }

    if (*exchangeSubmit)
    {
      mediator::ExchangeCommand command;
      command.commandId =
        commandId.empty()
          ? "cli-" + std::to_string(
                       std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count())
          : commandId;
      command.sourceTwin = TwinId(fromTwin);
      command.destinationTwin = TwinId(toTwin);
      command.items = splitCsv(itemsCsv);
      command.requestedBy = requestedBy;

      mediator::ExchangeReceipt receipt =
        mediator::MediatorClient(mediatorUrl).submitExchange(command);
      std::cout << mediator::toJson(receipt).dump(2) << std::endl;
      return receipt.status == mediator::ReceiptStatus::Delivered ? 0 : 1;
    }

    if (*recipeRun)
    {
      std::ifstream in(recipeFile);
      if (!in)
        throw Error(ErrorCode::BadConfig, "cannot open recipe '" + recipeFile + "'");
      std::string bytes((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());

      std::map<std::string, TwinId> bindings;
      for (const auto &binding : bindArgs)
      {
        auto eq = binding.find('=');
        if (eq == std::string::npos || eq == 0)
          throw Error(ErrorCode::BadConfig, "bad --bind '" + binding + "'");
        bindings[binding.substr(0, eq)] = TwinId(binding.substr(eq + 1));
      }

      orch::OrchestratorClient client(orchestratorUrl);
      orch::Recipe parsed = orch::loadRecipe(bytes);
      client.registerRecipe(bytes);
      field::JobRecord record = client.run(parsed.name, bindings);
      std::cout << field::toJson(record).dump(2) << std::endl;
      return 0;
    }

    if (*scenarioRun)
      return runScenarioCommand(scenarioName, seed, basePort, specPath, reportOut);
  }
  catch (const Error &e)
  {
    std::cerr << "error: " << e.what() << std::endl;
    switch (e.code())
    {
      case ErrorCode::NotFound:
      case ErrorCode::ScenarioUnknown:
      case ErrorCode::BadConfig:
        return 2;
      default:
        return 1;
    }
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }

  std::cerr << app.help() << std::endl;
  return 2;
}
